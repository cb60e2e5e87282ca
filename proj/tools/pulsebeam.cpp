// pulsebeam <subcommand> --config <file> [--out <file>] [--threads N]

#include "CLI11.hpp"

#include "pulsebeam/fieldcli.hpp"
#include "pulsebeam/verify.hpp"

#include <iostream>
#include <optional>
#include <string>

namespace {

using namespace pulsebeam;

struct Flags {
    std::string config;
    std::string out;
    int threads = 0;
};

int run_verify()
{
    int failed = 0;
    for (const auto& check : verify::run_all()) {
        std::cout << verify::format(check) << '\n';
        failed += check.passed ? 0 : 1;
    }
    std::cout << (failed == 0 ? "all checks passed" : std::to_string(failed) + " checks failed") << '\n';
    return failed == 0 ? 0 : 2;
}

int run_table(cli::Subcommand cmd, const Flags& flags, const CLI::App& sub)
{
    const auto cfg = cli::load_config(flags.config);
    const std::optional<int> thread_flag =
        sub.count("--threads") ? std::optional<int>(flags.threads) : std::nullopt;
    const int threads = cli::resolve_threads(thread_flag, cfg);
    std::optional<std::string> out = cfg.out;
    if (sub.count("--out"))
        out = flags.out;

    const auto result = cli::run(cmd, cfg, threads);
    if (out) {
        csv::write_csv(result.table, *out);
        std::cerr << "wrote " << result.table.rows.size() << " rows to " << *out << '\n';
        if (result.metrics) {
            const auto path = cli::metrics_path(*out);
            csv::write_csv(*result.metrics, path);
            std::cerr << "wrote " << result.metrics->rows.size() << " rows to " << path.string() << '\n';
        }
    } else {
        if (result.metrics)
            std::cout << csv::to_string(*result.metrics) << '\n';
        std::cout << csv::to_string(result.table);
    }
    return 0;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Pulsed-beam wavelets and channels: grid sampling, patterns, gain scans and checks"};
    app.require_subcommand(1);

    Flags flags;
    const std::vector<std::pair<cli::Subcommand, const char*>> commands{
        {cli::Subcommand::distance, "complex distance p, q over a grid"},
        {cli::Subcommand::propagator, "extended propagator over a grid"},
        {cli::Subcommand::wavelet, "pulsed-beam wavelet over a grid"},
        {cli::Subcommand::pattern, "duration, radiation pattern and peak versus angle"},
        {cli::Subcommand::channel, "channel metrics, amplitude and line-of-sight gain scan"},
        {cli::Subcommand::verify, "run the acceptance checks"},
    };
    std::vector<std::pair<cli::Subcommand, CLI::App*>> subs;
    for (const auto& [cmd, help] : commands) {
        auto* sub = app.add_subcommand(cli::to_string(cmd), help);
        auto* config = sub->add_option("--config", flags.config, "scenario config (JSON)");
        if (cmd != cli::Subcommand::verify)
            config->required();
        sub->add_option("--out", flags.out, "CSV output path (default: stdout)");
        sub->add_option("--threads", flags.threads, "worker threads (overrides PULSEBEAM_THREADS and config)");
        subs.emplace_back(cmd, sub);
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        for (const auto& [cmd, sub] : subs) {
            if (!sub->parsed())
                continue;
            if (cmd == cli::Subcommand::verify)
                return run_verify();
            return run_table(cmd, flags, *sub);
        }
    } catch (const Error& e) {
        std::cerr << "pulsebeam: " << e.what() << '\n';
        return cli::exit_code(e.code());
    } catch (const std::exception& e) {
        std::cerr << "pulsebeam: validation error: " << e.what() << '\n';
        return 1;
    }
    return 1;
}
