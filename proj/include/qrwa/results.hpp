#pragma once

#include <string>

#include "qrwa/simulation.hpp"

namespace qrwa {

// CSV renderings of a sweep result.  Floating values use 6 significant
// digits; an absent QSNR renders as an empty field.  Byte-deterministic for
// a fixed result.
std::string aggregate_csv(const SweepResult& result);
std::string raw_csv(const SweepResult& result);

// Token used in CSV output and CLI messages for a heuristic.
const char* heuristic_token(Heuristic h);

// Writes aggregate.csv and raw.csv into out_dir (created if missing).
// Throws std::runtime_error with path context on I/O failure.
void emit_results(const SweepResult& result, const std::string& out_dir);

}  // namespace qrwa
