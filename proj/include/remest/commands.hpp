#ifndef REMEST_COMMANDS_HPP
#define REMEST_COMMANDS_HPP

#include <iosfwd>
#include <string>

#include "remest/config.hpp"
#include "remest/simulator.hpp"
#include "remest/verify.hpp"

namespace remest {

/// Parses a strategy spec of the form
///   threshold:K | bernoulli:K,THETA | steering:K,THETA | timesharing:K,A,B[,A,B...]
SimStrategy parse_strategy(const std::string& spec);

/// Exit codes: 0 success, 2 config error, 3 verification failure.
int cmd_table(const RunConfig& cfg, std::ostream& out, std::ostream& err);
int cmd_curve(const RunConfig& cfg, std::ostream& out, std::ostream& err);
int cmd_lagrange(const RunConfig& cfg, std::ostream& out, std::ostream& err);
int cmd_solve(const RunConfig& cfg, std::ostream& out, std::ostream& err);
int cmd_simulate(const RunConfig& cfg, std::ostream& out, std::ostream& err);
int cmd_verify(const RunConfig& cfg, const VerifyOptions& options, std::ostream& out,
               std::ostream& err);

}  // namespace remest

#endif
