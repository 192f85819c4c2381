#include "vmplda/cli.hpp"

#include <algorithm>
#include <climits>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <numeric>

#include <CLI11.hpp>
#include <json.hpp>

#include "vmplda/engine.hpp"
#include "vmplda/eval.hpp"
#include "vmplda/ingest.hpp"
#include "vmplda/persist.hpp"

namespace vmplda::cli {

namespace {

// CLI11 consumes a reversed argument vector.
int parse(CLI::App& app, const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  std::vector<std::string> rev(args.rbegin(), args.rend());
  try {
    app.parse(rev);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << app.get_name() << ": " << e.what() << '\n';
    return kExitUsage;
  }
  return -1;
}

std::ifstream open_input(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open '" + path + "'");
  return in;
}

SavedModel read_model_file(const std::string& path) {
  auto in = open_input(path);
  return load_model(in);
}

}  // namespace

int cmd_train(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app("Fit a topic model by variational message passing", "train");
  std::string input, format = "text", vocab_path, model_out;
  int topics = 0, epochs = 100, min_count = 1, threads = 1;
  double alpha = 0.1, beta = 0.01, tol = 1e-4;
  std::uint64_t seed = 0;
  app.add_option("--input", input, "Corpus file")->required();
  app.add_option("--format", format, "text (one document per line) or bow (UCI bag-of-words)")
      ->check(CLI::IsMember({"text", "bow"}));
  app.add_option("--vocab", vocab_path, "Vocabulary file for --format bow");
  app.add_option("--topics", topics, "Number of topics (>= 2)")->required()->check(CLI::Range(2, INT_MAX));
  app.add_option("--alpha", alpha, "Symmetric document-topic prior")->check(CLI::PositiveNumber);
  app.add_option("--beta", beta, "Symmetric topic-word prior")->check(CLI::PositiveNumber);
  app.add_option("--epochs", epochs, "Maximum number of epochs")->check(CLI::Range(1, INT_MAX));
  app.add_option("--tol", tol, "Convergence threshold on the max parameter change")
      ->check(CLI::PositiveNumber);
  app.add_option("--seed", seed, "Initialization seed");
  app.add_option("--min-count", min_count, "Drop terms rarer than this (text format)")
      ->check(CLI::Range(1, INT_MAX));
  app.add_option("--threads", threads, "Document worker threads")->check(CLI::Range(1, 1024));
  app.add_option("--model-out", model_out, "Where to write the model JSON")->required();
  if (int rc = parse(app, args, out, err); rc >= 0) return rc;
  if (format == "bow" && vocab_path.empty()) {
    err << "train: --vocab is required with --format bow\n";
    return kExitUsage;
  }

  try {
    auto in = open_input(input);
    std::optional<Corpus> corpus;
    if (format == "text") {
      auto parsed = ingest::read_plaintext(in, min_count);
      if (parsed.dropped_documents > 0) {
        err << "warning: dropped " << parsed.dropped_documents << " empty documents\n";
      }
      corpus.emplace(std::move(parsed.corpus));
    } else {
      auto vocab_in = open_input(vocab_path);
      corpus.emplace(ingest::read_bow(in, vocab_in));
    }

    const auto hyper = Hyperparameters::symmetric(static_cast<std::size_t>(topics),
                                                  corpus->vocab_size(), alpha, beta);
    engine::FitOptions opts;
    opts.max_epochs = epochs;
    opts.tol = tol;
    opts.seed = seed;
    opts.parallel_documents = threads > 1;
    opts.threads = static_cast<std::size_t>(threads);

    const auto result = engine::fit(*corpus, hyper, opts, [&](int epoch, double delta, const auto&) {
      err << "epoch " << epoch << " delta " << std::setprecision(10) << delta << '\n';
    });
    if (!result.diagnostics.converged) {
      err << "warning: not converged after " << result.diagnostics.epochs_run << " epochs\n";
    }

    std::ofstream mo(model_out, std::ios::binary);
    if (!mo) throw std::runtime_error("cannot write '" + model_out + "'");
    save_model(mo, {corpus->vocab(), hyper, result.state.doc_topic, result.state.topic_word});
    if (!mo.flush()) throw std::runtime_error("failed writing '" + model_out + "'");
  } catch (const std::exception& e) {
    err << "train: " << e.what() << '\n';
    return kExitRuntime;
  }
  return kExitOk;
}

int cmd_topics(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app("Print the most probable words of every topic", "topics");
  std::string model_path;
  int n = 10;
  app.add_option("--model", model_path, "Model JSON written by train")->required();
  app.add_option("--n", n, "Words per topic")->check(CLI::Range(1, INT_MAX));
  if (int rc = parse(app, args, out, err); rc >= 0) return rc;

  try {
    const auto model = read_model_file(model_path);
    out << eval::report_to_json(
               eval::topic_report(model.topic_word, model.vocab, static_cast<std::size_t>(n)))
        << '\n';
  } catch (const std::exception& e) {
    err << "topics: " << e.what() << '\n';
    return kExitRuntime;
  }
  return kExitOk;
}

int cmd_infer(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app("Infer topic proportions for new documents", "infer");
  std::string model_path, input;
  int epochs = 100;
  double tol = 1e-4;
  app.add_option("--model", model_path, "Model JSON written by train")->required();
  app.add_option("--input", input, "Documents, one per line")->required();
  app.add_option("--epochs", epochs, "Maximum passes per document")->check(CLI::Range(1, INT_MAX));
  app.add_option("--tol", tol, "Convergence threshold on the document's alpha")
      ->check(CLI::PositiveNumber);
  if (int rc = parse(app, args, out, err); rc >= 0) return rc;

  std::size_t succeeded = 0;
  try {
    const auto model = read_model_file(model_path);
    auto in = open_input(input);
    engine::FitOptions opts;
    opts.max_epochs = epochs;
    opts.tol = tol;

    std::string line;
    for (std::size_t i = 0; std::getline(in, line); ++i) {
      if (!line.empty() && line.back() == '\r') line.pop_back();
      Document doc;
      for (const auto& t : ingest::tokenize(line)) {
        if (auto id = model.vocab.find(t)) doc.tokens.push_back(*id);
      }
      nlohmann::json rec{{"doc", i}};
      if (doc.tokens.empty()) {
        rec["error"] = "document has no in-vocabulary tokens";
      } else {
        const auto a = engine::infer_document(model.topic_word, doc, model.hyper, opts);
        const double total = a.total();
        std::vector<double> theta(a.size());
        for (std::size_t k = 0; k < a.size(); ++k) theta[k] = a[k] / total;
        rec["theta"] = theta;
        ++succeeded;
      }
      out << rec.dump() << '\n';
    }
  } catch (const std::exception& e) {
    err << "infer: " << e.what() << '\n';
    return kExitRuntime;
  }
  return succeeded > 0 ? kExitOk : kExitRuntime;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  static const char* usage = "usage: vmplda {train|topics|infer} [options]  (--help for details)\n";
  if (args.empty()) {
    err << usage;
    return kExitUsage;
  }
  const std::vector<std::string> rest(args.begin() + 1, args.end());
  if (args[0] == "train") return cmd_train(rest, out, err);
  if (args[0] == "topics") return cmd_topics(rest, out, err);
  if (args[0] == "infer") return cmd_infer(rest, out, err);
  if (args[0] == "--help" || args[0] == "-h") {
    out << usage;
    return kExitOk;
  }
  err << "unknown command '" << args[0] << "'\n" << usage;
  return kExitUsage;
}

}  // namespace vmplda::cli
