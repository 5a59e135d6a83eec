#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "sqlaudit/hardness.hpp"
#include "sqlaudit/sql_model.hpp"

namespace sqlaudit {

enum class DistractorKind { Perturbed, BowNearest };

struct MCQItem {
  std::string nl_question;
  std::string schema_ref;               // database name
  std::array<std::string, 3> options;   // shuffled
  int answer_index = 0;                 // position of the gold query
  // kind of the distractor at each non-answer position
  std::array<std::optional<DistractorKind>, 3> distractor_kinds;
};

// Applies one seeded perturbation: drop a WHERE predicate, swap an aggregate
// function, replace a selected column with a different schema column, or
// rename a referenced table. Output parses and differs from the input.
// Throws std::runtime_error when no operator applies.
std::string perturb_query(std::string_view gold, const Database& schema,
                          uint64_t seed);

// Cosine similarity of lowercase bag-of-words count vectors; SQL punctuation
// separates tokens. 0 when either vector is empty.
double bow_cosine(std::string_view q1, std::string_view q2);

// Argmax of bow_cosine over the pool, earliest index on ties.
// Throws std::invalid_argument on an empty pool.
size_t nearest_query_index(std::string_view gold,
                           const std::vector<std::string>& pool);
std::string nearest_query(std::string_view gold,
                          const std::vector<std::string>& pool);

// n_items seeded-random gold queries, each with a perturbation distractor and
// the BOW-nearest distractor, option order shuffled per item.
std::vector<MCQItem> build_test(const std::vector<QueryRecord>& dataset,
                                const std::vector<Database>& dumps,
                                size_t n_items, uint64_t seed);

struct AnnotationMatrix {
  // items x annotators, entries in {0,1,2}
  std::vector<std::vector<int>> choices;
  size_t items() const { return choices.size(); }
  size_t annotators() const {
    return choices.empty() ? 0 : choices[0].size();
  }
};

struct AnnotationScores {
  std::vector<double> per_annotator_accuracy;
  double majority_accuracy = 0.0;  // plurality; ties score incorrect
  double fleiss_kappa = 0.0;
  std::optional<std::string> note;  // set for degenerate kappa
};

// answer_key[i] is the correct option for item i.
AnnotationScores score_annotations(const AnnotationMatrix& m,
                                   const std::vector<int>& answer_key);

}  // namespace sqlaudit
