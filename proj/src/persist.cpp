#include "vmplda/persist.hpp"

#include <cstdio>
#include <istream>
#include <ostream>
#include <span>
#include <string>

#include <json.hpp>

namespace vmplda {

namespace {

void write_number(std::ostream& out, double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  out << buf;
}

void write_array(std::ostream& out, std::span<const double> xs) {
  out << '[';
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (i) out << ", ";
    write_number(out, xs[i]);
  }
  out << ']';
}

void write_matrix(std::ostream& out, const Matrix& m) {
  out << "[\n";
  for (std::size_t r = 0; r < m.rows(); ++r) {
    out << "    ";
    write_array(out, m.row(r));
    out << (r + 1 < m.rows() ? ",\n" : "\n");
  }
  out << "  ]";
}

std::vector<double> read_vector(const nlohmann::json& j, const char* name, std::size_t n) {
  if (!j.is_array() || j.size() != n) {
    throw model_format_error(std::string(name) + ": expected array of length " + std::to_string(n));
  }
  std::vector<double> out;
  out.reserve(n);
  for (const auto& x : j) {
    if (!x.is_number()) throw model_format_error(std::string(name) + ": non-numeric entry");
    out.push_back(x.get<double>());
  }
  return out;
}

Matrix read_matrix(const nlohmann::json& j, const char* name, std::size_t rows, std::size_t cols) {
  if (!j.is_array() || j.size() != rows) {
    throw model_format_error(std::string(name) + ": expected " + std::to_string(rows) + " rows");
  }
  Matrix m(rows, cols);
  for (std::size_t r = 0; r < rows; ++r) {
    auto row = read_vector(j[r], name, cols);
    for (std::size_t c = 0; c < cols; ++c) {
      if (!(row[c] > 0.0)) throw model_format_error(std::string(name) + ": non-positive entry");
      m(r, c) = row[c];
    }
  }
  return m;
}

}  // namespace

void save_model(std::ostream& out, const SavedModel& model) {
  const std::size_t K = model.hyper.num_topics();
  const std::size_t V = model.hyper.vocab_size();
  out << "{\n";
  out << "  \"K\": " << K << ",\n";
  out << "  \"V\": " << V << ",\n";
  out << "  \"vocab\": " << nlohmann::json(model.vocab.terms()).dump() << ",\n";
  out << "  \"alpha_prior\": ";
  write_array(out, model.hyper.alpha_prior.pseudocounts());
  out << ",\n  \"beta_prior_scalar_or_vector\": ";
  write_array(out, model.hyper.beta_prior.pseudocounts());
  out << ",\n  \"doc_topic\": ";
  write_matrix(out, model.doc_topic);
  out << ",\n  \"topic_word\": ";
  write_matrix(out, model.topic_word);
  out << "\n}\n";
}

SavedModel load_model(std::istream& in) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw model_format_error(std::string("model is not valid JSON: ") + e.what());
  }
  try {
    for (const char* key : {"K", "V", "vocab", "alpha_prior", "beta_prior_scalar_or_vector",
                            "doc_topic", "topic_word"}) {
      if (!j.contains(key)) throw model_format_error(std::string("missing field '") + key + "'");
    }
    const auto K = j.at("K").get<std::size_t>();
    const auto V = j.at("V").get<std::size_t>();
    auto terms = j.at("vocab").get<std::vector<std::string>>();
    if (terms.size() != V) throw model_format_error("vocab: expected " + std::to_string(V) + " terms");

    const auto& beta_json = j.at("beta_prior_scalar_or_vector");
    std::vector<double> beta = beta_json.is_number()
                                   ? std::vector<double>(V, beta_json.get<double>())
                                   : read_vector(beta_json, "beta_prior_scalar_or_vector", V);
    Hyperparameters hyper(DirichletParams(read_vector(j.at("alpha_prior"), "alpha_prior", K)),
                          DirichletParams(std::move(beta)));

    const auto& doc_json = j.at("doc_topic");
    const std::size_t M = doc_json.is_array() ? doc_json.size() : 0;
    return {Vocabulary(std::move(terms)), std::move(hyper), read_matrix(doc_json, "doc_topic", M, K),
            read_matrix(j.at("topic_word"), "topic_word", K, V)};
  } catch (const nlohmann::json::exception& e) {
    throw model_format_error(std::string("malformed model: ") + e.what());
  } catch (const std::logic_error& e) {
    throw model_format_error(std::string("invalid model: ") + e.what());
  }
}

}  // namespace vmplda
