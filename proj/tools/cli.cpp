// SPDX-License-Identifier: Apache-2.0
//
// cogmimo: effective capacity of cognitive MIMO links
// ------------------------------------------------------------------------

#include "cli.hpp"

#include "cogmimo/channel.hpp"
#include "cogmimo/lowsnr.hpp"
#include "cogmimo/queuesim.hpp"
#include "cogmimo/rayleigh.hpp"
#include "cogmimo/stats.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <limits>
#include <set>
#include <sstream>
#include <stdexcept>
#include <unistd.h>

namespace cogmimo::cli {

namespace {

using nlohmann::json;

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::string num(double v)
{
    if (std::isnan(v))
        return "";
    if (std::isinf(v))
        return v > 0 ? "inf" : "-inf";
    char buf[32];
    auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

std::string fixed2(double v)
{
    if (std::isnan(v))
        return "";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", v);
    return buf;
}

std::string db_of(double linear) { return num(linear_to_db(linear)); }

void write_row(std::ostream& out, const std::vector<std::string>& cells)
{
    for (std::size_t i = 0; i < cells.size(); ++i)
        out << (i ? "," : "") << cells[i];
    out << '\n';
}

void write_header(std::ostream& out, const std::string& command, const RunConfig& config,
                  const RunOptions& opts)
{
    out << "# " << kVersion << '\n';
    out << "# command: " << command << '\n';
    out << "# config: " << config.to_json().dump() << '\n';
    out << "# seed: " << opts.seed << '\n';
    out << "# samples: " << opts.samples << '\n';
    out << "# normalization: " << to_string(opts.normalization) << '\n';
    out << "# covariance: " << to_string(opts.covariance) << '\n';
}

std::string rate_column(Normalization norm)
{
    return norm == Normalization::per_dimension ? "effective_rate_bps_per_hz_per_dim"
                                                : "effective_rate_bps_per_hz";
}

double get_number(const json& j, const char* key, double fallback)
{
    if (!j.contains(key))
        return fallback;
    if (!j.at(key).is_number())
        throw std::invalid_argument(std::string("config key '") + key + "' must be a number");
    return j.at(key).get<double>();
}

int get_int(const json& j, const char* key, int fallback)
{
    if (!j.contains(key))
        return fallback;
    if (!j.at(key).is_number_integer())
        throw std::invalid_argument(std::string("config key '") + key + "' must be an integer");
    return j.at(key).get<int>();
}

// linear key or its _db twin, not both
std::optional<double> get_power(const json& j, const std::string& key)
{
    const std::string db_key = key + "_db";
    if (j.contains(key) && j.contains(db_key))
        throw std::invalid_argument("config sets both '" + key + "' and '" + db_key + "'");
    if (j.contains(key))
        return get_number(j, key.c_str(), 0);
    if (j.contains(db_key))
        return db_to_linear(get_number(j, db_key.c_str(), 0));
    return std::nullopt;
}

RunConfig with_sensing(const RunConfig& base, double p_d, double p_f)
{
    RunConfig out = base;
    out.sensing = SensingModel(p_d, p_f);
    return out;
}

SpectralEnsemble make_ensemble(const RunConfig& config, const RunOptions& opts)
{
    if (opts.samples < 1)
        throw std::invalid_argument("--samples must be at least 1");
    const auto& sys = config.system;
    const auto samples = sample_rayleigh(sys.tx_antennas(), sys.rx_antennas(), opts.samples,
                                         opts.seed, opts.workers);
    return SpectralEnsemble(samples, default_noise_covariance(sys), opts.workers);
}

double rate_at(const SpectralEnsemble& ens, const PowerPolicy& policy, const SystemConfig& sys,
               const TransitionModel& tm, const RunOptions& opts)
{
    if (sys.theta() == 0)
        return ergodic_capacity(ens, policy, sys, tm, opts.covariance, opts.normalization);
    return effective_rate(ens, policy, sys, tm, opts.covariance, opts.normalization);
}

} // namespace

double RunConfig::resolved_p2() const
{
    return p2 ? *p2 : p2_cap(p_max, p_int, sensing.p_detect(), mu);
}

json RunConfig::to_json() const
{
    json j;
    j["T"] = system.frame_duration();
    j["B"] = system.bandwidth();
    j["sigma_n2"] = system.noise_variance();
    j["sigma_s2"] = system.interference_variance();
    j["M"] = system.tx_antennas();
    j["N"] = system.rx_antennas();
    j["theta"] = system.theta();
    j["p_d"] = sensing.p_detect();
    j["p_f"] = sensing.p_false_alarm();
    j["a"] = activity.a();
    j["b"] = activity.b();
    j["p_max"] = p_max;
    j["p_int"] = p_int;
    j["mu"] = mu;
    j["p2"] = resolved_p2();
    return j;
}

RunConfig config_from_json(const json& j)
{
    if (!j.is_object())
        throw std::invalid_argument("config must be a flat JSON object");
    static const std::set<std::string> known = {
        "T", "B", "sigma_n2", "sigma_s2", "M", "N", "theta", "p_d", "p_f", "a", "b",
        "p_max", "p_max_db", "p_int", "p_int_db", "mu", "p2", "p2_db"};
    for (const auto& item : j.items())
        if (!known.count(item.key()))
            throw std::invalid_argument("unknown config key '" + item.key() + "'");

    const RunConfig defaults;
    const auto& d = defaults.system;
    RunConfig out;
    out.system = SystemConfig(get_number(j, "T", d.frame_duration()), get_number(j, "B", d.bandwidth()),
                              get_number(j, "sigma_n2", d.noise_variance()),
                              get_number(j, "sigma_s2", d.interference_variance()),
                              get_int(j, "M", d.tx_antennas()), get_int(j, "N", d.rx_antennas()),
                              get_number(j, "theta", d.theta()));
    out.sensing = SensingModel(get_number(j, "p_d", defaults.sensing.p_detect()),
                               get_number(j, "p_f", defaults.sensing.p_false_alarm()));
    out.activity = ActivityModel(get_number(j, "a", defaults.activity.a()),
                                 get_number(j, "b", defaults.activity.b()));
    out.p_max = get_power(j, "p_max").value_or(defaults.p_max);
    out.p_int = get_power(j, "p_int").value_or(defaults.p_int);
    out.mu = get_number(j, "mu", defaults.mu);
    out.p2 = get_power(j, "p2");
    // full policy validation, including the cap on p2
    PowerPolicy(out.p_max, out.p_int, out.mu, out.resolved_p2(), out.sensing.p_detect());
    return out;
}

RunConfig load_config(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in)
        throw std::invalid_argument("cannot open config file " + path.string());
    json j;
    try {
        in >> j;
    } catch (const json::parse_error& e) {
        throw std::invalid_argument("config file " + path.string() + " is not valid JSON: " + e.what());
    }
    return config_from_json(j);
}

SweepAxis parse_axis(const std::string& name)
{
    if (name == "p_int") return SweepAxis::p_int;
    if (name == "snr") return SweepAxis::snr;
    if (name == "p_d") return SweepAxis::p_d;
    if (name == "mu") return SweepAxis::mu;
    if (name == "theta") return SweepAxis::theta;
    if (name == "p2") return SweepAxis::p2;
    throw std::invalid_argument("unknown sweep axis '" + name + "'");
}

std::string to_string(SweepAxis axis)
{
    switch (axis) {
    case SweepAxis::p_int: return "p_int";
    case SweepAxis::snr: return "snr";
    case SweepAxis::p_d: return "p_d";
    case SweepAxis::mu: return "mu";
    case SweepAxis::theta: return "theta";
    case SweepAxis::p2: return "p2";
    }
    return "p_int";
}

void SweepSpec::validate() const
{
    if (values.empty())
        throw std::invalid_argument("sweep needs at least one axis value");
    if (!std::is_sorted(values.begin(), values.end()))
        throw std::invalid_argument("sweep values must be sorted");
    if (grid < 2)
        throw std::invalid_argument("--grid must be at least 2");
    for (double th : thetas)
        if (!(th >= 0))
            throw std::invalid_argument("theta values must be non-negative");
}

std::vector<double> axis_values(double from, double to, double step)
{
    if (!(step > 0) || !(to >= from))
        throw std::invalid_argument("need --to >= --from and a positive --step");
    const auto count = static_cast<std::size_t>(std::floor((to - from) / step + 1e-9)) + 1;
    std::vector<double> out(count);
    for (std::size_t i = 0; i < count; ++i)
        out[i] = from + static_cast<double>(i) * step;
    return out;
}

void run_sweep(const SweepSpec& spec, const RunOptions& opts, std::ostream& out)
{
    spec.validate();
    const RunConfig& cfg = spec.fixed;
    const auto ens = make_ensemble(cfg, opts);
    std::vector<double> thetas = spec.thetas;
    if (spec.axis == SweepAxis::theta || thetas.empty())
        thetas = {cfg.system.theta()};
    const SearchGrid grid{spec.grid, spec.grid, false};
    const std::string rate_col = rate_column(opts.normalization);

    std::vector<std::string> header;
    switch (spec.axis) {
    case SweepAxis::p_int:
    case SweepAxis::theta:
        header = {"theta", "p_int_db", "mu_star", "p2_star_db", rate_col};
        break;
    case SweepAxis::p_d:
        header = {"p_d", "theta", "p_int_db", "mu_star", "p2_star_db", rate_col};
        break;
    case SweepAxis::mu:
        header = {"mu", "theta", "p_int_db", "p2_db", rate_col};
        break;
    case SweepAxis::p2:
        header = {"p2_db", "theta", "p_int_db", "mu", "feasible", rate_col};
        break;
    case SweepAxis::snr:
        header = {"snr_db", "theta", rate_col};
        if (spec.report_ebn0) {
            header.push_back("ebn0");
            header.push_back("ebn0_db");
        }
        break;
    }
    if (spec.cross_validate) {
        header.push_back("closed_form");
        header.push_back("monte_carlo");
        header.push_back("mc_stderr");
    }

    struct Point {
        double theta;
        double value;
    };
    std::vector<Point> points;
    for (double th : thetas)
        for (double v : spec.values)
            points.push_back({spec.axis == SweepAxis::theta ? v : th, v});

    std::vector<std::vector<std::string>> rows(points.size());
    std::vector<std::string> errors(points.size());
    parallel_for(points.size(), opts.workers, [&](std::size_t idx) {
        try {
            const auto& pt = points[idx];
            const SystemConfig sys = cfg.system.with_theta(pt.theta);
            SensingModel sensing = cfg.sensing;
            if (spec.axis == SweepAxis::p_d)
                sensing = SensingModel(pt.value, cfg.sensing.p_false_alarm());
            const TransitionModel tm(cfg.activity, sensing);
            const double pd = sensing.p_detect();
            double p_int = cfg.p_int;
            if (spec.axis == SweepAxis::p_int)
                p_int = db_to_linear(pt.value);

            std::vector<std::string> row;
            std::optional<PowerPolicy> policy;
            switch (spec.axis) {
            case SweepAxis::p_int:
            case SweepAxis::theta:
            case SweepAxis::p_d: {
                const auto best = effective_capacity(ens, sys, tm, cfg.p_max, p_int, grid,
                                                     opts.covariance, opts.normalization);
                if (spec.axis == SweepAxis::p_d)
                    row.push_back(num(pt.value));
                row.insert(row.end(), {num(pt.theta), db_of(p_int), num(best.mu_star),
                                       db_of(best.p2_star), num(best.value)});
                policy.emplace(cfg.p_max, p_int, best.mu_star, best.p2_star, pd);
                break;
            }
            case SweepAxis::mu: {
                const double mu = pt.value;
                if (!(mu >= 0 && mu <= 1))
                    throw std::invalid_argument("mu values must lie in [0, 1]");
                const double p2 = p2_cap(cfg.p_max, p_int, pd, mu);
                policy.emplace(cfg.p_max, p_int, mu, p2, pd);
                row = {num(mu), num(pt.theta), db_of(p_int), db_of(p2),
                       num(rate_at(ens, *policy, sys, tm, opts))};
                break;
            }
            case SweepAxis::p2: {
                const double p2 = db_to_linear(pt.value);
                const double mu = mu_cap(p2, p_int, pd);
                const bool feasible = p2 <= p2_cap(cfg.p_max, p_int, pd, mu) * (1 + 1e-12);
                row = {num(pt.value), num(pt.theta), db_of(p_int), num(mu), feasible ? "1" : "0"};
                if (feasible) {
                    policy.emplace(cfg.p_max, p_int, mu, p2, pd);
                    row.push_back(num(rate_at(ens, *policy, sys, tm, opts)));
                } else {
                    row.push_back("");
                }
                break;
            }
            case SweepAxis::snr: {
                const double snr = db_to_linear(pt.value);
                const double p2 = snr * sys.rx_antennas() * sys.bandwidth() * sys.noise_variance();
                policy = PowerPolicy::unconstrained(cfg.mu, p2);
                const double rate = rate_at(ens, *policy, sys, tm, opts);
                row = {num(pt.value), num(pt.theta), num(rate)};
                if (spec.report_ebn0) {
                    row.push_back(num(snr / rate));
                    row.push_back(db_of(snr / rate));
                }
                break;
            }
            }

            if (spec.cross_validate) {
                double closed = kNaN, mc = kNaN, se = kNaN;
                if (policy && sys.theta() > 0) {
                    const auto est = effective_rate_estimate(ens, *policy, sys, tm, opts.covariance,
                                                             opts.normalization);
                    mc = est.value;
                    se = est.std_error;
                    if (cfg.activity.memoryless() && opts.covariance == CovarianceMode::uniform)
                        closed = closed_form_effective_rate(sys, sensing, cfg.activity, *policy,
                                                            opts.normalization);
                }
                row.insert(row.end(), {num(closed), num(mc), num(se)});
            }
            rows[idx] = std::move(row);
        } catch (const std::exception& e) {
            errors[idx] = e.what();
        }
    });
    for (const auto& e : errors)
        if (!e.empty())
            throw std::runtime_error(e);

    std::ostringstream cmd;
    cmd << "sweep --axis " << to_string(spec.axis);
    write_header(out, cmd.str(), cfg, opts);
    write_row(out, header);
    for (const auto& row : rows)
        write_row(out, row);
}

void report_lowsnr(const RunConfig& config, const LowSnrOptions& lopts, const RunOptions& opts,
                   std::ostream& out)
{
    const auto ens = make_ensemble(config, opts);
    const auto thetas = lopts.thetas.empty() ? std::vector<double>{config.system.theta()} : lopts.thetas;
    const auto pds = lopts.p_d.empty() ? std::vector<double>{config.sensing.p_detect()} : lopts.p_d;
    const auto pfs = lopts.p_f.empty() ? std::vector<double>{config.sensing.p_false_alarm()} : lopts.p_f;

    RunOptions shown = opts;
    shown.normalization = Normalization::per_dimension;
    shown.covariance = CovarianceMode::beamform;
    write_header(out, "lowsnr-report", config, shown);
    write_row(out, {"theta", "p_d", "p_f", "a", "b", "ell1", "ell2", "c_dot", "c_ddot", "ebn0_min",
                    "ebn0_min_db", "s0", "m1", "m2", "slope_status", "closed_form_ebn0_min",
                    "closed_form_ebn0_min_db", "closed_form_s0"});
    for (double th : thetas)
        for (double pd : pds)
            for (double pf : pfs) {
                const RunConfig cfg = with_sensing(config, pd, pf);
                const SystemConfig sys = cfg.system.with_theta(th);
                const TransitionModel tm(cfg.activity, cfg.sensing);
                const auto rep = lowsnr_report(ens, tm, sys);
                double cf_ebn0 = kNaN, cf_s0 = kNaN;
                if (sys.interference_variance() > 0) {
                    const auto cf = uniform_closed_forms(sys, cfg.sensing, cfg.activity,
                                                         sys.interference_variance());
                    cf_ebn0 = cf.ebn0_min;
                    cf_s0 = cf.s0;
                }
                write_row(out, {num(th), num(pd), num(pf), num(cfg.activity.a()),
                                num(cfg.activity.b()), num(rep.ell1), num(rep.ell2),
                                num(rep.c_dot), num(rep.c_ddot), num(rep.ebn0_min.linear),
                                fixed2(rep.ebn0_min.db), num(rep.s0), std::to_string(rep.m1),
                                std::to_string(rep.m2), rep.slope_available ? "ok" : rep.slope_reason,
                                num(cf_ebn0), fixed2(std::isnan(cf_ebn0) ? kNaN : linear_to_db(cf_ebn0)),
                                num(cf_s0)});
            }
}

void validate_queue(const RunConfig& config, const QueueOptions& qopts, const RunOptions& opts,
                    std::ostream& out)
{
    if (qopts.seeds < 1 || qopts.frames < 1)
        throw std::invalid_argument("queue-validate needs at least one seed and one frame");
    for (double th : qopts.thetas)
        if (!(th > 0))
            throw std::invalid_argument("queue-validate needs theta > 0");
    const SystemConfig& base = config.system;
    const TransitionModel tm(config.activity, config.sensing);
    const PowerPolicy policy(config.p_max, config.p_int, config.mu, config.resolved_p2(),
                             config.sensing.p_detect());

    std::vector<double> arrivals(qopts.thetas.size());
    if (qopts.arrival) {
        if (!(*qopts.arrival >= 0))
            throw std::invalid_argument("--arrival must be non-negative");
        std::fill(arrivals.begin(), arrivals.end(), *qopts.arrival);
    } else {
        const auto ens = make_ensemble(config, opts);
        for (std::size_t i = 0; i < arrivals.size(); ++i) {
            const SystemConfig sys = base.with_theta(qopts.thetas[i]);
            arrivals[i] = effective_rate(ens, policy, sys, tm, opts.covariance, Normalization::per_hz) *
                          sys.frame_duration() * sys.bandwidth();
        }
    }

    struct Job {
        std::size_t theta_index;
        std::uint64_t seed;
    };
    std::vector<Job> jobs;
    for (std::size_t i = 0; i < qopts.thetas.size(); ++i)
        for (int s = 0; s < qopts.seeds; ++s)
            jobs.push_back({i, opts.seed + 1 + static_cast<std::uint64_t>(s)});

    std::vector<std::vector<std::string>> rows(jobs.size());
    std::vector<std::string> errors(jobs.size());
    parallel_for(jobs.size(), opts.workers, [&](std::size_t j) {
        try {
            const auto& job = jobs[j];
            const double target = qopts.thetas[job.theta_index];
            const double arrival = arrivals[job.theta_index];
            const auto trace = simulate(base.with_theta(target), config.sensing, config.activity,
                                        policy, arrival, qopts.frames, job.seed, opts.covariance);
            std::string theta_hat = "n/a", r2 = "n/a", low = "1", pass = "n/a";
            if (arrival > 0) {
                try {
                    const auto est = estimate_decay(trace);
                    theta_hat = num(est.theta_hat);
                    r2 = num(est.r_squared);
                    low = est.low_confidence ? "1" : "0";
                    pass = std::abs(est.theta_hat - target) <= qopts.tolerance * target ? "1" : "0";
                } catch (const std::invalid_argument&) {
                    // tail too short to fit
                }
            }
            rows[j] = {num(target), num(arrival), theta_hat, r2, std::to_string(qopts.frames),
                       std::to_string(job.seed), low, pass};
        } catch (const std::exception& e) {
            errors[j] = e.what();
        }
    });
    for (const auto& e : errors)
        if (!e.empty())
            throw std::runtime_error(e);

    RunOptions shown = opts;
    shown.normalization = Normalization::per_hz;
    write_header(out, "queue-validate", config, shown);
    write_row(out, {"theta_target", "arrival_bits_per_frame", "theta_hat", "r_squared", "frames",
                    "seed", "low_confidence", "pass"});
    for (const auto& row : rows)
        write_row(out, row);
}

void mu_vs_p2(const RunConfig& config, const MuCurveOptions& mopts, std::ostream& out)
{
    if (mopts.p2_db.empty() || mopts.p_int_db.empty())
        throw std::invalid_argument("mu-vs-p2 needs p2 and p_int values");
    out << "# " << kVersion << '\n';
    out << "# command: mu-vs-p2\n";
    out << "# config: " << config.to_json().dump() << '\n';
    write_row(out, {"p_int_db", "p2_db", "mu"});
    for (double pi_db : mopts.p_int_db)
        for (double p2_db : mopts.p2_db)
            write_row(out, {num(pi_db), num(p2_db),
                            num(mu_cap(db_to_linear(p2_db), db_to_linear(pi_db),
                                       config.sensing.p_detect()))});
}

void dump_ensemble(const RunConfig& config, const RunOptions& opts, std::ostream& out)
{
    const auto& sys = config.system;
    const auto samples =
        sample_rayleigh(sys.tx_antennas(), sys.rx_antennas(), opts.samples, opts.seed, opts.workers);
    write_ensemble_csv(out, samples);
}

void write_atomically(const std::filesystem::path& path,
                      const std::function<void(std::ostream&)>& body)
{
    auto tmp = path;
    tmp += ".tmp." + std::to_string(::getpid());
    try {
        {
            std::ofstream file(tmp, std::ios::binary | std::ios::trunc);
            if (!file)
                throw std::runtime_error("cannot open " + tmp.string() + " for writing");
            body(file);
            file.flush();
            if (!file)
                throw std::runtime_error("write to " + tmp.string() + " failed");
        }
        std::filesystem::rename(tmp, path);
    } catch (...) {
        std::error_code ec;
        std::filesystem::remove(tmp, ec);
        throw;
    }
}

int run_main(int argc, char** argv)
{
    CLI::App app{"Effective capacity and energy efficiency of cognitive MIMO links"};
    app.set_version_flag("--version", kVersion);
    app.require_subcommand(1);

    std::string config_path, out_path, norm_name = "per_hz", cov_name = "uniform";
    RunOptions opts;
    opts.workers = std::max(1u, std::thread::hardware_concurrency());
    app.add_option("--config", config_path, "JSON config file (flat key/value)");
    app.add_option("--seed", opts.seed, "RNG seed");
    app.add_option("--samples", opts.samples, "channel draws per ensemble");
    app.add_option("--out", out_path, "CSV output path (stdout if omitted)");
    app.add_option("--normalization", norm_name, "per_hz or per_dimension")
        ->check(CLI::IsMember({"per_hz", "per_dimension"}));
    app.add_option("--covariance", cov_name, "uniform, waterfill or beamform")
        ->check(CLI::IsMember({"uniform", "waterfill", "beamform"}));
    app.add_option("--workers", opts.workers, "worker threads");

    SweepSpec sweep;
    std::string axis_name, report = "rate";
    std::optional<double> from, to, step;
    std::vector<double> values;
    auto* sweep_cmd = app.add_subcommand("sweep", "sweep one parameter and report effective rates");
    sweep_cmd->add_option("--axis", axis_name, "p_int, snr, p_d, mu, theta or p2")->required();
    sweep_cmd->add_option("--from", from, "first axis value (dB for p_int, snr, p2)");
    sweep_cmd->add_option("--to", to, "last axis value");
    sweep_cmd->add_option("--step", step, "axis step");
    sweep_cmd->add_option("--values", values, "explicit axis values")->delimiter(',');
    sweep_cmd->add_option("--thetas", sweep.thetas, "QoS exponents")->delimiter(',');
    sweep_cmd->add_option("--report", report, "rate or ebn0")->check(CLI::IsMember({"rate", "ebn0"}));
    sweep_cmd->add_flag("--cross-validate", sweep.cross_validate,
                        "add closed-form and Monte Carlo columns");
    sweep_cmd->add_option("--grid", sweep.grid, "grid points per axis of the (mu, P2) search");

    LowSnrOptions lopts;
    auto* low_cmd = app.add_subcommand("lowsnr-report", "low-SNR derivatives, energy per bit, slope");
    low_cmd->add_option("--thetas", lopts.thetas)->delimiter(',');
    low_cmd->add_option("--p-d", lopts.p_d, "detection probabilities")->delimiter(',');
    low_cmd->add_option("--p-f", lopts.p_f, "false-alarm probabilities")->delimiter(',');

    QueueOptions qopts;
    std::optional<double> arrival;
    auto* queue_cmd = app.add_subcommand("queue-validate", "check theta against simulated queue tails");
    queue_cmd->add_option("--thetas", qopts.thetas)->delimiter(',');
    queue_cmd->add_option("--frames", qopts.frames);
    queue_cmd->add_option("--seeds", qopts.seeds, "replications");
    queue_cmd->add_option("--arrival", arrival, "bits per frame; overrides the effective capacity");
    queue_cmd->add_option("--tolerance", qopts.tolerance, "relative pass band on theta_hat");

    MuCurveOptions mopts;
    double p2_from = -10, p2_to = 30, p2_step = 1;
    auto* mu_cmd = app.add_subcommand("mu-vs-p2", "largest feasible mu against P2");
    mu_cmd->add_option("--p-int-db", mopts.p_int_db)->delimiter(',');
    mu_cmd->add_option("--from", p2_from, "first P2 in dB");
    mu_cmd->add_option("--to", p2_to, "last P2 in dB");
    mu_cmd->add_option("--step", p2_step, "P2 step in dB");

    auto* dump_cmd = app.add_subcommand("dump-ensemble", "write the channel ensemble as CSV");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    }

    try {
        opts.normalization = parse_normalization(norm_name);
        opts.covariance = parse_covariance_mode(cov_name);
        const RunConfig config = config_path.empty() ? config_from_json(json::object())
                                                     : load_config(config_path);
        std::function<void(std::ostream&)> body;
        if (*sweep_cmd) {
            sweep.axis = parse_axis(axis_name);
            sweep.fixed = config;
            sweep.report_ebn0 = report == "ebn0";
            if (!values.empty())
                sweep.values = values;
            else if (from && to && step)
                sweep.values = axis_values(*from, *to, *step);
            else
                throw std::invalid_argument("sweep needs --values or --from/--to/--step");
            if (sweep.report_ebn0 && sweep.axis != SweepAxis::snr)
                throw std::invalid_argument("--report ebn0 needs --axis snr");
            body = [&](std::ostream& o) { run_sweep(sweep, opts, o); };
        } else if (*low_cmd) {
            body = [&](std::ostream& o) { report_lowsnr(config, lopts, opts, o); };
        } else if (*queue_cmd) {
            qopts.arrival = arrival;
            body = [&](std::ostream& o) { validate_queue(config, qopts, opts, o); };
        } else if (*mu_cmd) {
            mopts.p2_db = axis_values(p2_from, p2_to, p2_step);
            body = [&](std::ostream& o) { mu_vs_p2(config, mopts, o); };
        } else if (*dump_cmd) {
            body = [&](std::ostream& o) { dump_ensemble(config, opts, o); };
        }

        if (out_path.empty()) {
            std::ostringstream buffer;
            body(buffer);
            std::cout << buffer.str();
        } else {
            write_atomically(out_path, body);
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
    return 0;
}

} // namespace cogmimo::cli
