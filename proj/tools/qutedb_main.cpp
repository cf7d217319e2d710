// qutedb command line tool: REPL, batch runner, EXPLAIN, and the two
// benchmark commands (crossover sweep, amplified-filter accuracy sweep).

#include "qdb/engine.hpp"
#include "qdb/errors.hpp"
#include "qdb/grover.hpp"
#include "qdb/optimizer.hpp"
#include "qdb/sql/parser.hpp"
#include "qdb/synthetic.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>

namespace {

using qdb::Engine;
using qdb::StatementResult;
using u64 = std::uint64_t;

// Accepts both plain integers and the power notation "2^30".
u64 parse_count(const std::string& text) {
    const auto caret = text.find('^');
    if (caret == std::string::npos) {
        return std::stoull(text);
    }
    const u64 base = std::stoull(text.substr(0, caret));
    const u64 exponent = std::stoull(text.substr(caret + 1));
    u64 value = 1;
    for (u64 i = 0; i < exponent; ++i) {
        value *= base;
    }
    return value;
}

void print_result(const StatementResult& result, const std::string& output_mode) {
    switch (result.kind) {
        case StatementResult::Kind::Message:
            std::cout << result.text << '\n';
            break;
        case StatementResult::Kind::Explain:
            std::cout << result.text;
            break;
        case StatementResult::Kind::Rows:
            if (output_mode == "csv") {
                std::cout << result.rows.to_csv();
            } else {
                std::cout << result.rows.to_table();
            }
            std::cout << result.rows.rows.size() << " row(s)\n";
            break;
    }
}

int run_repl(Engine& engine, const std::string& output_mode) {
    std::string buffer;
    std::string line;
    std::cout << "qute> " << std::flush;
    while (std::getline(std::cin, line)) {
        buffer += line;
        buffer += '\n';
        const auto semi = buffer.find(';');
        if (semi != std::string::npos) {
            const std::string statement = buffer.substr(0, semi);
            buffer = buffer.substr(semi + 1);
            const std::string trimmed = statement.substr(
                statement.find_first_not_of(" \t\r\n") == std::string::npos
                    ? statement.size()
                    : statement.find_first_not_of(" \t\r\n"));
            if (trimmed == "exit" || trimmed == "quit" || trimmed == "EXIT" ||
                trimmed == "QUIT") {
                break;
            }
            if (!trimmed.empty()) {
                try {
                    print_result(engine.execute_sql(trimmed), output_mode);
                } catch (const qdb::Error& e) {
                    std::cerr << "error: " << e.what() << '\n';
                } catch (const std::exception& e) {
                    std::cerr << "error: " << e.what() << '\n';
                }
            }
        }
        std::cout << "qute> " << std::flush;
    }
    std::cout << '\n';
    return 0;
}

int run_script_file(Engine& engine, const std::string& path, const std::string& output_mode) {
    std::ifstream in(path);
    if (!in) {
        std::cerr << "error: cannot open " << path << '\n';
        return 1;
    }
    const std::string text((std::istreambuf_iterator<char>(in)),
                           std::istreambuf_iterator<char>());
    try {
        for (const auto& stmt : qdb::sql::parse_script(text)) {
            print_result(engine.execute(stmt), output_mode);
        }
    } catch (const qdb::Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}

int bench_crossover(Engine& engine, const std::string& n_min_text,
                    const std::string& n_max_text, const std::string& m_rule, bool calibrate,
                    const std::string& out_path) {
    qdb::opt::CrossoverConfig config;
    config.n_min = parse_count(n_min_text);
    config.n_max = parse_count(n_max_text);
    config.m_rule = m_rule == "selectivity"
                        ? qdb::opt::CrossoverConfig::MRule::FixedSelectivity
                        : qdb::opt::CrossoverConfig::MRule::FixedOne;

    qdb::opt::ClassicalCostModel classical = engine.config().classical;
    if (calibrate) {
        const auto fit =
            qdb::opt::calibrate_cost_model(engine.config().device, engine.config().depth);
        config.tau_layer_ns = fit.tau_layer_ns;
        classical.c_tuple_ns = fit.c_tuple_ns;
        std::cerr << "calibrated: tau_layer=" << fit.tau_layer_ns
                  << "ns c_tuple=" << fit.c_tuple_ns << "ns max_rel_err=" << fit.max_rel_err
                  << '\n';
    }
    const auto result = qdb::opt::crossover_analysis(engine.config().device,
                                                     engine.config().depth, classical, config);
    if (out_path.empty()) {
        qdb::opt::write_crossover_csv(std::cout, result);
    } else {
        std::ofstream out(out_path);
        qdb::opt::write_crossover_csv(out, result);
    }
    if (result.crossover_n) {
        std::cerr << "crossover at N=" << *result.crossover_n << " (2^"
                  << std::log2(static_cast<double>(*result.crossover_n)) << ")\n";
    } else {
        std::cerr << "no crossover inside the sweep range\n";
    }
    return 0;
}

// Measured-vs-analytic success sweep of the amplified filter at small N.
int bench_grover(Engine& engine, const std::string& n_max_text, u64 shots,
                 const std::string& out_path) {
    const u64 n_max = std::min<u64>(parse_count(n_max_text), u64{1} << 10);
    std::ostringstream csv;
    csv << "N,M,k,analytic,noiseless,noisy,deviation\n";
    for (u64 n = 16; n <= n_max; n <<= 1) {
        const u64 m = std::max<u64>(1, static_cast<u64>(0.02 * static_cast<double>(n)));
        std::vector<u64> values(n, 0);
        std::mt19937_64 rng(engine.config().seed + n);
        for (auto& v : values) {
            v = 1 + rng() % 62;
        }
        for (u64 i = 0; i < m; ++i) {
            values[i] = 0;
        }
        qdb::QromLoader loader(static_cast<int>(std::log2(static_cast<double>(n))));
        loader.add_column("c", 6, values);
        const auto oracle = qdb::compile_oracle(qdb::Predicate::eq("c", 0.0), loader,
                                                loader.rid_bits(), 6);

        qdb::GroverOptions opts;
        opts.shots = shots;
        opts.m_est = m;
        opts.noise = qdb::NoiseModel::disabled(engine.config().seed + n);
        const auto clean = qdb::grover_filter(oracle, opts);
        qdb::GroverOptions noisy_opts = opts;
        noisy_opts.noise =
            qdb::NoiseModel::from_device(engine.config().device, engine.config().seed + n);
        const auto noisy = qdb::grover_filter(oracle, noisy_opts);

        const double theta =
            std::asin(std::sqrt(static_cast<double>(m) / static_cast<double>(n)));
        const double analytic =
            std::pow(std::sin((2.0 * static_cast<double>(clean.k) + 1.0) * theta), 2);
        csv << n << ',' << m << ',' << clean.k << ',' << analytic << ','
            << clean.success_estimate << ',' << noisy.success_estimate << ','
            << std::abs(noisy.success_estimate - analytic) << '\n';
    }
    if (out_path.empty()) {
        std::cout << csv.str();
    } else {
        std::ofstream out(out_path);
        out << csv.str();
    }
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"hybrid quantum-classical SQL engine"};
    app.require_subcommand(0, 1);

    std::string config_path, device_path, db_dir, output_mode = "table";
    u64 seed_flag = 0;
    bool seed_set = false;
    u64 shots_flag = 0;
    app.add_option("--config", config_path, "engine config (JSON)");
    app.add_option("--device", device_path, "device model (JSON)");
    app.add_option("--db", db_dir, "database directory to load/persist");
    app.add_option("--output", output_mode, "result format: table|csv")
        ->check(CLI::IsMember({"table", "csv"}));
    auto* seed_opt = app.add_option("--seed", seed_flag, "random seed");
    app.add_option("--shots", shots_flag, "default measurement shots");

    auto* repl_cmd = app.add_subcommand("repl", "interactive SQL loop");
    auto* run_cmd = app.add_subcommand("run", "execute a SQL script");
    std::string script_path;
    run_cmd->add_option("file", script_path, "script file")->required();
    auto* explain_cmd = app.add_subcommand("explain", "print the hybrid plan of a query");
    std::string explain_sql;
    explain_cmd->add_option("sql", explain_sql, "SELECT statement")->required();

    auto* bench_cmd = app.add_subcommand("bench", "benchmark commands");
    auto* crossover_cmd = bench_cmd->add_subcommand("crossover", "cost-model sweep over N");
    std::string n_min = "2^10", n_max = "2^40", m_rule = "one", bench_out;
    bool calibrate = false;
    crossover_cmd->add_option("--n-min", n_min, "smallest N (accepts 2^k)");
    crossover_cmd->add_option("--n-max", n_max, "largest N (accepts 2^k)");
    crossover_cmd->add_option("--m-rule", m_rule, "one|selectivity")
        ->check(CLI::IsMember({"one", "selectivity"}));
    crossover_cmd->add_flag("--calibrate", calibrate, "fit constants from simulator runs");
    crossover_cmd->add_option("--out", bench_out, "CSV output file");
    auto* grover_cmd =
        bench_cmd->add_subcommand("grover", "measured vs analytic success sweep");
    std::string grover_n_max = "2^10";
    u64 grover_shots = qdb::kDefaultShots;
    grover_cmd->add_option("--n-max", grover_n_max, "largest N (accepts 2^k, capped at 2^10)");
    grover_cmd->add_option("--shots", grover_shots, "shots per run");
    grover_cmd->add_option("--out", bench_out, "CSV output file");

    CLI11_PARSE(app, argc, argv);
    seed_set = seed_opt->count() > 0;

    try {
        qdb::Config config;
        if (!config_path.empty()) {
            config = qdb::Config::from_json_file(config_path);
        }
        if (!device_path.empty()) {
            config.device = qdb::DeviceModel::load_json(device_path);
        }
        if (seed_set) {
            config.seed = seed_flag;
        }
        if (shots_flag > 0) {
            config.policy.default_shots = shots_flag;
        }
        Engine engine(std::move(config));
        if (!db_dir.empty() && std::filesystem::exists(std::filesystem::path(db_dir) /
                                                       "catalog.json")) {
            engine.catalog() = qdb::Catalog::load(db_dir);
        }

        int rc = 0;
        if (*run_cmd) {
            rc = run_script_file(engine, script_path, output_mode);
        } else if (*explain_cmd) {
            std::cout << engine.explain_sql(explain_sql);
        } else if (*bench_cmd) {
            if (*crossover_cmd) {
                rc = bench_crossover(engine, n_min, n_max, m_rule, calibrate, bench_out);
            } else if (*grover_cmd) {
                rc = bench_grover(engine, grover_n_max, grover_shots, bench_out);
            } else {
                std::cerr << "bench needs a subcommand: crossover | grover\n";
                rc = 2;
            }
        } else if (*repl_cmd || app.get_subcommands().empty()) {
            rc = run_repl(engine, output_mode);
        }
        if (!db_dir.empty() && rc == 0) {
            engine.catalog().save(db_dir);
        }
        return rc;
    } catch (const qdb::Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
}
