#include "qdb/engine.hpp"

#include "qdb/errors.hpp"
#include "qdb/sql/ir.hpp"
#include "qdb/sql/parser.hpp"

#include <nlohmann/json.hpp>

#include <fstream>

namespace qdb {

Config Config::from_json_string(const std::string& text) {
    auto j = nlohmann::json::parse(text, nullptr, false);
    if (j.is_discarded()) {
        raise(ErrorCode::ParseError, "config is not valid JSON");
    }
    Config config;
    if (j.contains("device")) {
        if (j["device"].is_string()) {
            config.device = DeviceModel::load_json(j["device"].get<std::string>());
        } else {
            config.device = DeviceModel::from_json_string(j["device"].dump());
        }
    }
    if (j.contains("depth_model")) {
        config.depth.apply_json_overrides(j["depth_model"].dump());
    }
    config.classical.c_tuple_ns = j.value("c_tuple_ns", config.classical.c_tuple_ns);
    config.policy.default_shots = j.value("default_shots", config.policy.default_shots);
    config.policy.qubit_cap = j.value("qubit_cap", config.policy.qubit_cap);
    config.policy.deferred_band = j.value("deferred_band", config.policy.deferred_band);
    config.policy.queue_penalty_ns = j.value("queue_penalty_ns", config.policy.queue_penalty_ns);
    config.policy.shot_cap_factor = j.value("shot_cap_factor", config.policy.shot_cap_factor);
    config.policy.t_load_ns = j.value("t_load_ns", config.policy.t_load_ns);
    config.policy.ae_phase_bits = j.value("ae_phase_bits", config.policy.ae_phase_bits);
    config.policy.count_phase_bits =
        j.value("count_phase_bits", config.policy.count_phase_bits);
    config.policy.latency_budget_ms =
        j.value("latency_budget_ms", config.policy.latency_budget_ms);
    config.seed = j.value("seed", config.seed);
    config.noisy = j.value("noisy", config.noisy);
    config.strategy_c = j.value("strategy_c", config.strategy_c);
    config.device.qubit_cap = config.policy.qubit_cap;
    return config;
}

Config Config::from_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        raise(ErrorCode::IoError, "cannot open config file " + path);
    }
    std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return from_json_string(text);
}

Engine::Engine(Config config) : config_(std::move(config)) {}

opt::HybridPlan Engine::plan_query(const sql::Statement& stmt) {
    auto logical = sql::lower_logical(stmt, catalog_);
    sql::apply_rewrites(logical, catalog_);
    auto quantum = sql::lower_quantum(std::move(logical), catalog_, config_.device);
    return opt::plan(std::move(quantum), catalog_, config_.device, config_.policy,
                     config_.depth, config_.classical);
}

StatementResult Engine::execute(const sql::Statement& stmt) {
    StatementResult result;
    switch (stmt.kind) {
        case sql::Statement::Kind::CreateTable: {
            catalog_.create_table(stmt.create->def);
            result.kind = StatementResult::Kind::Message;
            result.text = "created table " + stmt.create->def.name;
            return result;
        }
        case sql::Statement::Kind::Insert: {
            catalog_.insert_rows(stmt.insert->table, stmt.insert->rows);
            result.kind = StatementResult::Kind::Message;
            result.text = "inserted " + std::to_string(stmt.insert->rows.size()) + " rows into " +
                          stmt.insert->table;
            return result;
        }
        case sql::Statement::Kind::CopyCsv: {
            const auto rows = catalog_.ingest_csv(stmt.copy->path, stmt.copy->table);
            result.kind = StatementResult::Kind::Message;
            result.text = "copied " + std::to_string(rows) + " rows into " + stmt.copy->table;
            return result;
        }
        case sql::Statement::Kind::Select:
            break;
    }

    auto hybrid = plan_query(stmt);
    if (stmt.explain && !stmt.explain_analyze) {
        result.kind = StatementResult::Kind::Explain;
        result.text = opt::explain(hybrid);
        return result;
    }
    exec::ExecutorOptions options;
    options.seed = config_.seed;
    options.noisy = config_.noisy;
    options.policy = config_.policy;
    exec::Executor executor(catalog_, config_.device, options);
    result.rows = executor.execute(hybrid);
    result.kind = StatementResult::Kind::Rows;
    if (stmt.explain_analyze) {
        result.kind = StatementResult::Kind::Explain;
        result.text = opt::explain(hybrid) + "---\n" + result.rows.trace_text();
    }
    return result;
}

StatementResult Engine::execute_sql(const std::string& sql_text) {
    return execute(sql::parse_statement(sql_text));
}

std::string Engine::explain_sql(const std::string& sql_text) {
    auto stmt = sql::parse_statement(sql_text);
    if (stmt.kind != sql::Statement::Kind::Select) {
        raise(ErrorCode::UnsupportedFeature, "EXPLAIN covers SELECT statements");
    }
    return opt::explain(plan_query(stmt));
}

void Engine::run_script(const std::string& text) {
    for (const auto& stmt : sql::parse_script(text)) {
        execute(stmt);
    }
}

} // namespace qdb
