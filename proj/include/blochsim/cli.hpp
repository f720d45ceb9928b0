// cli.hpp — command-line surface.
//
// Subcommands: design (bend-radius table), simulate (ideal correlation
// sweep), noisy (measurement-chain emulation), oracle (dual-route
// cross-check), heatmap (CSV → pixmap).  Every run writes its outputs
// atomically and finishes with a manifest that reproduces it bit-for-bit.
// Exit codes: 0 success, 1 config error, 2 numerical failure, 3 oracle
// mismatch.
#pragma once

#include <cstdint>
#include <filesystem>

#include "blochsim/config.hpp"

namespace blochsim {

int cmd_design(const DeviceConfig& cfg, const std::filesystem::path& out_dir);
int cmd_simulate(const DeviceConfig& cfg, const std::filesystem::path& out_dir, int jobs = 1);
int cmd_noisy(const DeviceConfig& cfg, const std::filesystem::path& out_dir, int jobs = 1);
int cmd_oracle(const DeviceConfig& cfg, const std::filesystem::path& out_dir,
               std::uint64_t battery_seed);
int cmd_heatmap(const std::filesystem::path& input_csv, const std::filesystem::path& output_pixmap,
                int block_size = 16, bool use_palette = false);

// Full argv dispatch including config loading, --out/--seed/--fractions
// overrides, the BLOCHSIM_OUT fallback, and exception → exit-code mapping.
int run_cli(int argc, char** argv);

}  // namespace blochsim
