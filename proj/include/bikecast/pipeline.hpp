#ifndef BIKECAST_PIPELINE_HPP
#define BIKECAST_PIPELINE_HPP

#include <string>

#include "bikecast/config.hpp"

namespace bikecast {

// Stage-per-command pipeline over on-disk artifacts: each stage reads
// the raw inputs and/or upstream artifacts named in its config, writes
// its outputs plus a manifest, and nothing else. Re-running a stage
// with unchanged inputs reproduces its artifacts byte for byte (the
// manifest timestamp and measured wall seconds aside).
void run_ingest(const RunConfig& cfg);
void run_graph(const RunConfig& cfg);
void run_features(const RunConfig& cfg);
void run_train(const RunConfig& cfg);
void run_evaluate(const RunConfig& cfg);
void run_sweep(const RunConfig& cfg);
void run_report(const RunConfig& cfg);

// Dispatches one subcommand; returns the process exit code
// (0 success, 1 user/config error, 2 data/artifact error).
int run_command(const std::string& command, const RunConfig& cfg);

} // namespace bikecast

#endif
