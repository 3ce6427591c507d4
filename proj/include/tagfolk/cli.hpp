#ifndef TAGFOLK_CLI_HPP
#define TAGFOLK_CLI_HPP

#include <iosfwd>
#include <string>
#include <vector>

namespace tagfolk {

/// Entry point of the `tagfolk` tool: subcommands ingest, stats, classify,
/// simulate and vectorize. Returns the process exit code; nothing is left
/// in the output directory when a command fails.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace tagfolk

#endif  // TAGFOLK_CLI_HPP
