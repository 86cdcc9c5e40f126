#ifndef PTQM_CLI_HPP
#define PTQM_CLI_HPP

#include <string>
#include <vector>

namespace ptqm::cli {

/// Parses argv and runs exactly one subcommand. Returns 0 on success, 2 on a
/// negative verdict (condition not satisfied, Hamiltonian rejected, failed
/// reproduction assertion), 1 on errors. Every run writes its result files
/// plus a manifest.json into the chosen output directory.
int dispatch(int argc, const char* const* argv);
int dispatch(const std::vector<std::string>& args);

}  // namespace ptqm::cli

#endif  // PTQM_CLI_HPP
