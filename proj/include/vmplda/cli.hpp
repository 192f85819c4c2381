#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace vmplda::cli {

// Exit codes shared by every subcommand.
inline constexpr int kExitOk = 0;
inline constexpr int kExitRuntime = 1;
inline constexpr int kExitUsage = 2;

// Each command takes its arguments without the program and subcommand names.
int cmd_train(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);
int cmd_topics(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);
int cmd_infer(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// Dispatches on args[0] (train, topics, infer).
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace vmplda::cli
