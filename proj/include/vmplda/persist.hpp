#pragma once

#include <iosfwd>
#include <stdexcept>

#include "vmplda/model.hpp"

namespace vmplda {

/// Trained model as persisted on disk. Responsibilities are not stored.
struct SavedModel {
  Vocabulary vocab;
  Hyperparameters hyper;
  Matrix doc_topic;
  Matrix topic_word;
};

class model_format_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Writes {"K", "V", "vocab", "alpha_prior", "beta_prior_scalar_or_vector",
/// "doc_topic", "topic_word"} with every number printed to 17 significant
/// digits, so a load restores the exact doubles.
void save_model(std::ostream& out, const SavedModel& model);

/// Parses the format written by save_model. beta_prior_scalar_or_vector may
/// be a single number (expanded to V entries) or an array of length V.
/// Throws model_format_error on malformed or inconsistent input.
SavedModel load_model(std::istream& in);

}  // namespace vmplda
