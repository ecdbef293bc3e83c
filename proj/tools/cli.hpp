// SPDX-License-Identifier: Apache-2.0
//
// cogmimo: effective capacity of cognitive MIMO links
// ------------------------------------------------------------------------

#pragma once

#include "cogmimo/config.hpp"
#include "cogmimo/effcap.hpp"
#include "cogmimo/rates.hpp"

#include <json.hpp>

#include <cstdint>
#include <filesystem>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace cogmimo::cli {

inline constexpr const char* kVersion = "cogmimo 0.1.0";

/// Fully resolved run configuration (linear units).
struct RunConfig {
    SystemConfig system = default_system();
    SensingModel sensing = default_sensing();
    ActivityModel activity = default_activity();
    double p_max = kDefaultPeakPower;
    double p_int = 1.0;
    double mu = 1.0;
    std::optional<double> p2; // defaults to the cap at mu

    double resolved_p2() const;
    nlohmann::json to_json() const;
};

RunConfig config_from_json(const nlohmann::json& j);
RunConfig load_config(const std::filesystem::path& path);

struct RunOptions {
    std::uint64_t seed = 1;
    std::size_t samples = 100000;
    Normalization normalization = Normalization::per_hz;
    CovarianceMode covariance = CovarianceMode::uniform;
    unsigned workers = 1;
};

enum class SweepAxis { p_int, snr, p_d, mu, theta, p2 };

SweepAxis parse_axis(const std::string& name);
std::string to_string(SweepAxis axis);

struct SweepSpec {
    SweepAxis axis = SweepAxis::p_int;
    std::vector<double> values; // dB for p_int, snr, p2; linear otherwise
    RunConfig fixed;
    std::vector<double> thetas; // empty: the configured theta
    bool report_ebn0 = false;
    bool cross_validate = false;
    int grid = 101;

    void validate() const;
};

std::vector<double> axis_values(double from, double to, double step);

void run_sweep(const SweepSpec& spec, const RunOptions& opts, std::ostream& out);

struct LowSnrOptions {
    std::vector<double> thetas;
    std::vector<double> p_d;
    std::vector<double> p_f;
};

void report_lowsnr(const RunConfig& config, const LowSnrOptions& lopts, const RunOptions& opts,
                   std::ostream& out);

struct QueueOptions {
    std::vector<double> thetas = {0.005, 0.01, 0.05};
    std::size_t frames = 1000000;
    int seeds = 4;
    std::optional<double> arrival; // bits per frame, overrides the effective capacity
    double tolerance = 0.25;
};

void validate_queue(const RunConfig& config, const QueueOptions& qopts, const RunOptions& opts,
                    std::ostream& out);

struct MuCurveOptions {
    std::vector<double> p_int_db = {-10, 0, 10};
    std::vector<double> p2_db;
};

void mu_vs_p2(const RunConfig& config, const MuCurveOptions& mopts, std::ostream& out);

void dump_ensemble(const RunConfig& config, const RunOptions& opts, std::ostream& out);

// Runs `body` into a temporary sibling of `path` and renames it into place; nothing is
// left behind on failure.
void write_atomically(const std::filesystem::path& path,
                      const std::function<void(std::ostream&)>& body);

int run_main(int argc, char** argv);

} // namespace cogmimo::cli
