#pragma once

// Scenario configs, grid sampling and the subcommand runners behind the
// `pulsebeam` executable.

#include "pulsebeam/channel.hpp"
#include "pulsebeam/channel_json.hpp"
#include "pulsebeam/csv.hpp"
#include "pulsebeam/error.hpp"
#include "pulsebeam/geometry.hpp"
#include "pulsebeam/grid.hpp"
#include "pulsebeam/propagator.hpp"
#include "pulsebeam/signals.hpp"
#include "pulsebeam/wavelet.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <exception>
#include <filesystem>
#include <fstream>
#include <functional>
#include <limits>
#include <mutex>
#include <optional>
#include <set>
#include <string>
#include <thread>
#include <vector>

namespace pulsebeam::cli {

enum class Subcommand { distance, propagator, wavelet, pattern, channel, verify };

inline const char* to_string(Subcommand c) noexcept
{
    switch (c) {
    case Subcommand::distance: return "distance";
    case Subcommand::propagator: return "propagator";
    case Subcommand::wavelet: return "wavelet";
    case Subcommand::pattern: return "pattern";
    case Subcommand::channel: return "channel";
    case Subcommand::verify: return "verify";
    }
    return "unknown";
}

struct PatternSpec {
    double s = 0;
    double a = 0;
    double r = 0;
    int theta_count = 181;
};

struct RunConfig {
    std::optional<FourVector> extent;   ///< single-extent scenario (y, s)
    std::optional<nlohmann::json> channel;
    DrivingSignal signal = DeltaDerivative{0};
    GridSpec grid;
    GeometryConfig geometry;
    SignalOptions signal_options;
    std::optional<PatternSpec> pattern;
    int gain_theta_count = 721;
    std::optional<std::string> out;
    std::optional<int> threads;
};

namespace detail {

inline double number(const nlohmann::json& j, const std::string& where)
{
    if (!j.is_number())
        throw Error(Errc::validation, where + " must be a number");
    const double v = j.get<double>();
    if (!std::isfinite(v))
        throw Error(Errc::validation, where + " must be finite");
    return v;
}

inline std::int64_t integer(const nlohmann::json& j, const std::string& where)
{
    if (j.is_number_integer())
        return j.get<std::int64_t>();
    if (j.is_number_float()) {
        const double v = j.get<double>();
        if (std::isfinite(v) && v == std::floor(v) && std::abs(v) < 9e15)
            return static_cast<std::int64_t>(v);
    }
    throw Error(Errc::validation, where + " must be an integer");
}

inline void reject_unknown(const nlohmann::json& j, const std::set<std::string>& known, const std::string& where)
{
    for (const auto& [key, _] : j.items())
        if (!known.contains(key))
            throw Error(Errc::validation, "unknown key '" + key + "' in " + where);
}

inline DrivingSignal parse_signal(const nlohmann::json& j, const std::filesystem::path& base)
{
    if (!j.is_object() || !j.contains("type") || !j.at("type").is_string())
        throw Error(Errc::validation, "signal needs a string 'type' (delta, gaussian or sampled)");
    const auto type = j.at("type").get<std::string>();
    DrivingSignal out;
    if (type == "delta") {
        reject_unknown(j, {"type", "order"}, "signal");
        const auto order = j.contains("order") ? integer(j.at("order"), "signal.order") : 0;
        if (order < 0 || order > 1000)
            throw Error(Errc::validation, "signal.order must be a non-negative integer");
        out = DeltaDerivative{static_cast<int>(order)};
    } else if (type == "gaussian") {
        reject_unknown(j, {"type", "center", "width", "amplitude"}, "signal");
        GaussianPulse g;
        if (j.contains("center"))
            g.center = number(j.at("center"), "signal.center");
        if (j.contains("width"))
            g.width = number(j.at("width"), "signal.width");
        if (j.contains("amplitude"))
            g.amplitude = number(j.at("amplitude"), "signal.amplitude");
        out = g;
    } else if (type == "sampled") {
        reject_unknown(j, {"type", "csv", "times", "values"}, "signal");
        if (j.contains("csv")) {
            if (!j.at("csv").is_string())
                throw Error(Errc::validation, "signal.csv must be a path string");
            std::filesystem::path p = j.at("csv").get<std::string>();
            if (p.is_relative())
                p = base / p;
            out = SampledSignal::from_csv(p.string());
        } else {
            if (!j.contains("times") || !j.contains("values") || !j.at("times").is_array()
                || !j.at("values").is_array())
                throw Error(Errc::validation, "sampled signal needs 'csv' or 'times' and 'values' arrays");
            std::vector<double> times, values;
            for (const auto& v : j.at("times"))
                times.push_back(number(v, "signal.times[]"));
            for (const auto& v : j.at("values"))
                values.push_back(number(v, "signal.values[]"));
            out = SampledSignal(std::move(times), std::move(values));
        }
    } else {
        throw Error(Errc::validation, "unknown signal type '" + type + "' (expected delta, gaussian or sampled)");
    }
    validate(out);
    return out;
}

inline AxisSpec parse_axis(const nlohmann::json& j, const std::string& name)
{
    if (j.is_number())
        return AxisSpec::fixed(number(j, "grid." + name));
    if (!j.is_object())
        throw Error(Errc::validation, "grid." + name + " must be a number or {min, max, count}");
    reject_unknown(j, {"min", "max", "count"}, "grid." + name);
    if (!j.contains("min") || !j.contains("max") || !j.contains("count"))
        throw Error(Errc::validation, "grid." + name + " needs min, max and count");
    return {number(j.at("min"), "grid." + name + ".min"), number(j.at("max"), "grid." + name + ".max"),
            integer(j.at("count"), "grid." + name + ".count")};
}

} // namespace detail

/// Parses a scenario config. Relative file references resolve against `base`.
inline RunConfig parse_config(const nlohmann::json& j, const std::filesystem::path& base = {})
{
    using namespace detail;
    if (!j.is_object())
        throw Error(Errc::validation, "config must be a JSON object");
    reject_unknown(j,
                   {"extent", "channel", "signal", "grid", "max_points", "near_circle_tol", "quadrature_rel_tol",
                    "pattern", "gain_scan", "out", "threads"},
                   "config");
    RunConfig cfg;
    if (j.contains("extent")) {
        const auto& e = j.at("extent");
        if (!e.is_array() || e.size() != 4)
            throw Error(Errc::validation, "extent must be [yx, yy, yz, s]");
        cfg.extent = FourVector{{number(e[0], "extent[0]"), number(e[1], "extent[1]"), number(e[2], "extent[2]")},
                                number(e[3], "extent[3]")};
    }
    if (j.contains("channel")) {
        cfg.channel = j.at("channel");
        channel_from_json(*cfg.channel); // validate early
    }
    if (j.contains("signal"))
        cfg.signal = parse_signal(j.at("signal"), base);
    if (j.contains("grid")) {
        const auto& g = j.at("grid");
        if (!g.is_object())
            throw Error(Errc::validation, "grid must be an object with axes x1, x2, x3, t");
        reject_unknown(g, {"x1", "x2", "x3", "t"}, "grid");
        for (std::size_t i = 0; i < 4; ++i) {
            const std::string name = GridSpec::axis_names[i];
            if (g.contains(name))
                cfg.grid.axes[i] = parse_axis(g.at(name), name);
        }
    }
    if (j.contains("max_points")) {
        cfg.grid.max_points = integer(j.at("max_points"), "max_points");
        if (cfg.grid.max_points < 1)
            throw Error(Errc::validation, "max_points must be >= 1");
    }
    if (j.contains("near_circle_tol")) {
        cfg.geometry.near_circle_rel_tol = number(j.at("near_circle_tol"), "near_circle_tol");
        if (cfg.geometry.near_circle_rel_tol < 0)
            throw Error(Errc::validation, "near_circle_tol must be >= 0");
    }
    if (j.contains("quadrature_rel_tol")) {
        cfg.signal_options.rel_tol = number(j.at("quadrature_rel_tol"), "quadrature_rel_tol");
        if (!(cfg.signal_options.rel_tol > 0))
            throw Error(Errc::validation, "quadrature_rel_tol must be > 0");
    }
    if (j.contains("pattern")) {
        const auto& p = j.at("pattern");
        if (!p.is_object())
            throw Error(Errc::validation, "pattern must be an object {s, a, r, theta_count}");
        reject_unknown(p, {"s", "a", "r", "theta_count"}, "pattern");
        if (!p.contains("s") || !p.contains("a") || !p.contains("r"))
            throw Error(Errc::validation, "pattern needs s, a and r");
        PatternSpec spec{number(p.at("s"), "pattern.s"), number(p.at("a"), "pattern.a"), number(p.at("r"), "pattern.r")};
        if (p.contains("theta_count")) {
            const auto n = integer(p.at("theta_count"), "pattern.theta_count");
            if (n < 2 || n > 100'000'000)
                throw Error(Errc::validation, "pattern.theta_count must be >= 2");
            spec.theta_count = static_cast<int>(n);
        }
        cfg.pattern = spec;
    }
    if (j.contains("gain_scan")) {
        const auto& g = j.at("gain_scan");
        if (!g.is_object())
            throw Error(Errc::validation, "gain_scan must be an object {theta_count}");
        reject_unknown(g, {"theta_count"}, "gain_scan");
        if (g.contains("theta_count")) {
            const auto n = integer(g.at("theta_count"), "gain_scan.theta_count");
            if (n < 2 || n > 100'000'000)
                throw Error(Errc::validation, "gain_scan.theta_count must be >= 2");
            cfg.gain_theta_count = static_cast<int>(n);
        }
    }
    if (j.contains("out")) {
        if (!j.at("out").is_string())
            throw Error(Errc::validation, "out must be a path string");
        cfg.out = j.at("out").get<std::string>();
    }
    if (j.contains("threads")) {
        const auto n = integer(j.at("threads"), "threads");
        if (n < 1 || n > 4096)
            throw Error(Errc::validation, "threads must be between 1 and 4096");
        cfg.threads = static_cast<int>(n);
    }
    return cfg;
}

inline RunConfig load_config(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in)
        throw Error(Errc::io, "cannot open config '" + path.string() + "'");
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
        throw Error(Errc::validation, "config '" + path.string() + "' is not valid JSON: " + e.what());
    }
    return parse_config(j, path.parent_path());
}

/// Thread count with precedence: flag, then PULSEBEAM_THREADS, then config,
/// then the hardware concurrency.
inline int resolve_threads(std::optional<int> flag, const RunConfig& cfg)
{
    auto check = [](long long n, const std::string& where) {
        if (n < 1 || n > 4096)
            throw Error(Errc::validation, where + " must be between 1 and 4096");
        return static_cast<int>(n);
    };
    if (flag)
        return check(*flag, "--threads");
    if (const char* env = std::getenv("PULSEBEAM_THREADS"); env && *env) {
        char* end = nullptr;
        const long long n = std::strtoll(env, &end, 10);
        if (*end != '\0')
            throw Error(Errc::validation, "PULSEBEAM_THREADS must be a positive integer");
        return check(n, "PULSEBEAM_THREADS");
    }
    if (cfg.threads)
        return *cfg.threads;
    return static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
}

using Row = std::vector<csv::Cell>;

/// Evaluates row(i) for i in [0, n) on `threads` workers. Rows land at their
/// index, so the result does not depend on scheduling. If any row throws, the
/// exception of the lowest failing index is rethrown.
inline std::vector<Row> parallel_rows(std::int64_t n, int threads, const std::function<Row(std::int64_t)>& row)
{
    std::vector<Row> rows(static_cast<std::size_t>(n));
    std::atomic<std::int64_t> next{0};
    std::atomic<std::int64_t> first_failure{n};
    std::mutex mutex;
    std::exception_ptr failure;
    constexpr std::int64_t chunk = 64;

    auto worker = [&] {
        for (;;) {
            const std::int64_t begin = next.fetch_add(chunk);
            if (begin >= n)
                return;
            const std::int64_t end = std::min(n, begin + chunk);
            for (std::int64_t i = begin; i < end; ++i) {
                if (i > first_failure.load())
                    return;
                try {
                    rows[static_cast<std::size_t>(i)] = row(i);
                } catch (...) {
                    std::lock_guard lock(mutex);
                    if (i < first_failure.load()) {
                        first_failure.store(i);
                        failure = std::current_exception();
                    }
                    return;
                }
            }
        }
    };

    const auto count = static_cast<int>(std::clamp<std::int64_t>(threads, 1, std::max<std::int64_t>(1, n / chunk + 1)));
    if (count == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(static_cast<std::size_t>(count));
        for (int k = 0; k < count; ++k)
            pool.emplace_back(worker);
        for (auto& t : pool)
            t.join();
    }
    if (failure)
        std::rethrow_exception(failure);
    return rows;
}

struct Output {
    csv::Table table;
    std::optional<csv::Table> metrics; ///< written next to the main table
};

namespace detail {

// Field scenario: either a single extent, or a channel whose emitter sits at
// the origin of the grid offsets.
struct FieldScenario {
    FourVector origin;
    FourVector extent;
};

inline FieldScenario field_scenario(const RunConfig& cfg, const char* what)
{
    if (cfg.extent && cfg.channel)
        throw Error(Errc::validation, std::string(what) + " takes either 'extent' or 'channel', not both");
    if (cfg.extent)
        return {{}, *cfg.extent};
    if (cfg.channel) {
        const auto ch = channel_from_json(*cfg.channel);
        return {ch.emitter().center.vector(), ch.extent().vector()};
    }
    throw Error(Errc::validation, std::string(what) + " needs 'extent' [yx, yy, yz, s] or a 'channel'");
}

inline Row grid_prefix(const RealEvent& x)
{
    return {x.space().x, x.space().y, x.space().z, x.time()};
}

inline csv::Table sample_field(const RunConfig& cfg, int threads, const char* what,
                               const std::function<cplx(const Vec3&, double, const Vec3&, double)>& field)
{
    const auto scenario = field_scenario(cfg, what);
    cfg.grid.validate();
    const Vec3 y = scenario.extent.space;
    const double s = scenario.extent.time;
    if (norm(y) == 0)
        throw Error(Errc::degenerate_extension, std::string(what) + " needs a non-zero spatial extent (a > 0)");
    if (!(s > norm(y)))
        throw Error(Errc::causality, std::string(what) + " needs s > |y| for the extent");

    csv::Table table;
    table.columns = {"x1", "x2", "x3", "t", "re", "im", "abs", "status"};
    table.rows = parallel_rows(cfg.grid.size(), threads, [&](std::int64_t i) {
        const RealEvent x = cfg.grid.point(i);
        Row row = grid_prefix(x);
        const FourVector rel = x.vector() - scenario.origin;
        const auto d = complex_distance(rel.space, y, cfg.geometry);
        if (d.near_circle) {
            row.insert(row.end(), {std::monostate{}, std::monostate{}, std::monostate{}, std::string("singular")});
            return row;
        }
        const cplx v = field(rel.space, rel.time, y, s);
        row.insert(row.end(), {v.real(), v.imag(), std::abs(v), std::string(d.on_cut ? "on_cut" : "ok")});
        return row;
    });
    return table;
}

} // namespace detail

inline csv::Table run_distance(const RunConfig& cfg, int threads)
{
    const auto scenario = detail::field_scenario(cfg, "distance");
    cfg.grid.validate();
    const Vec3 y = scenario.extent.space;
    if (norm(y) == 0)
        throw Error(Errc::degenerate_extension, "distance needs a non-zero spatial extent (a > 0)");
    csv::Table table;
    table.columns = {"x1", "x2", "x3", "t", "p", "q", "status"};
    table.rows = parallel_rows(cfg.grid.size(), threads, [&](std::int64_t i) {
        const RealEvent x = cfg.grid.point(i);
        Row row = detail::grid_prefix(x);
        const auto d = complex_distance(x.space() - scenario.origin.space, y, cfg.geometry);
        const char* status = d.near_circle ? "singular" : d.on_cut ? "on_cut" : "ok";
        row.insert(row.end(), {d.p, d.q, std::string(status)});
        return row;
    });
    return table;
}

inline csv::Table run_propagator(const RunConfig& cfg, int threads)
{
    return detail::sample_field(cfg, threads, "propagator", [&](const Vec3& x, double t, const Vec3& y, double s) {
        return extended_propagator(x, y, t, s, cfg.geometry);
    });
}

inline csv::Table run_wavelet(const RunConfig& cfg, int threads)
{
    const WaveletOptions opt{cfg.geometry, cfg.signal_options};
    return detail::sample_field(cfg, threads, "wavelet", [&](const Vec3& x, double t, const Vec3& y, double s) {
        return pulsebeam::detail::wavelet_raw(cfg.signal, x, t, y, s, opt);
    });
}

inline csv::Table run_pattern(const RunConfig& cfg, int threads)
{
    if (!cfg.pattern)
        throw Error(Errc::validation, "pattern needs a 'pattern' object {s, a, r, theta_count}");
    const auto& p = *cfg.pattern;
    if (!(p.a >= 0) || !(p.s > p.a))
        throw Error(Errc::causality, "pattern needs s > a >= 0");
    if (!(p.r > 0))
        throw Error(Errc::validation, "pattern needs r > 0");
    const auto grid = half_angle_grid(p.theta_count);
    csv::Table table;
    table.columns = {"theta", "duration", "pattern", "peak"};
    table.rows = parallel_rows(static_cast<std::int64_t>(grid.size()), threads, [&](std::int64_t i) {
        const auto prof = beam_profile(p.s, p.a, p.r, {grid[static_cast<std::size_t>(i)]});
        const auto& b = prof.samples.front();
        return Row{b.theta, b.duration, b.pattern, b.peak};
    });
    return table;
}

/// Gain scan over the channel's apertures and separation distance, plus a
/// quantity/value table of metrics and the channel amplitude.
inline Output run_channel(const RunConfig& cfg, int threads)
{
    if (!cfg.channel)
        throw Error(Errc::validation, "channel needs a 'channel' object");
    const auto ch = channel_from_json(*cfg.channel);
    const auto m = channel_metrics(ch);
    const double r = norm(ch.separation().space());
    if (!(r > 0))
        throw Error(Errc::validation, "channel gain scan needs spatially separated endpoints (r > 0)");

    const auto& ye = ch.emitter().extent;
    const auto& yr = ch.receiver().extent;
    const auto grid = symmetric_angle_grid(cfg.gain_theta_count);
    Output out;
    out.table.columns = {"theta", "peak", "exact", "status"};
    // A null endpoint has zero duration; its far-zone peak is unbounded.
    const bool null_endpoint = ye.is_null() || yr.is_null();
    out.table.rows = parallel_rows(static_cast<std::int64_t>(grid.size()), threads, [&](std::int64_t i) {
        const double theta = grid[static_cast<std::size_t>(i)];
        if (null_endpoint)
            return Row{theta, std::monostate{}, std::monostate{}, std::string("infinite")};
        const auto g = gain_scan(ye.aperture(), ye.time(), yr.aperture(), yr.time(), r, {theta}, cfg.geometry);
        return Row{g.front().theta, g.front().peak, g.front().exact, std::string("ok")};
    });

    csv::Table metrics;
    metrics.columns = {"quantity", "value", "status"};
    auto add = [&](const char* name, double v) {
        if (std::isfinite(v))
            metrics.rows.push_back({std::string(name), v, std::string("ok")});
        else
            metrics.rows.push_back({std::string(name), std::monostate{}, std::string("infinite")});
    };
    add("emitter_duration", m.emitter_duration);
    add("receiver_duration", m.receiver_duration);
    add("duration", m.duration);
    add("emitter_bandwidth", m.emitter_bandwidth);
    add("receiver_bandwidth", m.receiver_bandwidth);
    add("bandwidth", m.bandwidth);
    add("aperture", m.aperture);
    const auto d = extended_distance(ch.separation().space(), ch.extent().space(), cfg.geometry);
    if (d.near_circle) {
        for (const char* name : {"amplitude_re", "amplitude_im", "amplitude_abs"})
            metrics.rows.push_back({std::string(name), std::monostate{}, std::string("singular")});
    } else {
        const cplx w = channel_amplitude(ch, cfg.signal, {cfg.geometry, cfg.signal_options});
        add("amplitude_re", w.real());
        add("amplitude_im", w.imag());
        add("amplitude_abs", std::abs(w));
    }
    out.metrics = std::move(metrics);
    return out;
}

inline Output run(Subcommand cmd, const RunConfig& cfg, int threads)
{
    switch (cmd) {
    case Subcommand::distance: return {run_distance(cfg, threads), {}};
    case Subcommand::propagator: return {run_propagator(cfg, threads), {}};
    case Subcommand::wavelet: return {run_wavelet(cfg, threads), {}};
    case Subcommand::pattern: return {run_pattern(cfg, threads), {}};
    case Subcommand::channel: return run_channel(cfg, threads);
    case Subcommand::verify: break;
    }
    throw Error(Errc::validation, "verify produces no table");
}

/// `gain.csv` -> `gain_metrics.csv`.
inline std::filesystem::path metrics_path(const std::filesystem::path& out)
{
    auto p = out;
    p.replace_filename(out.stem().string() + "_metrics" + out.extension().string());
    return p;
}

/// 0 ok, 1 validation (and every other precondition failure), 2 accuracy, 3 I/O.
inline int exit_code(Errc code) noexcept
{
    switch (code) {
    case Errc::accuracy: return 2;
    case Errc::io: return 3;
    default: return 1;
    }
}

} // namespace pulsebeam::cli
