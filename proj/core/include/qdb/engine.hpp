#pragma once

#include "qdb/device.hpp"
#include "qdb/executor.hpp"
#include "qdb/optimizer.hpp"
#include "qdb/sql/ast.hpp"
#include "qdb/storage.hpp"

#include <optional>
#include <string>

namespace qdb {

/// Engine configuration; every field has a working default so the engine
/// runs without a config file.
struct Config {
    DeviceModel device = DeviceModel::default_noisy();
    opt::DepthModel depth;
    opt::ClassicalCostModel classical;
    opt::PlanPolicy policy;
    std::uint64_t seed = 1;
    bool noisy = false;       // stochastic fault injection during sampling
    double strategy_c = 1.0;  // index escalation threshold constant

    static Config from_json_string(const std::string& text);
    static Config from_json_file(const std::string& path);
};

struct StatementResult {
    enum class Kind { Rows, Message, Explain };
    Kind kind = Kind::Message;
    exec::ResultSet rows;
    std::string text;
};

/// Single-process session: catalog + config + the compile/opt/execute
/// pipeline behind one SQL entry point.
class Engine {
  public:
    explicit Engine(Config config = {});

    Config& config() { return config_; }
    const Config& config() const { return config_; }
    Catalog& catalog() { return catalog_; }
    const Catalog& catalog() const { return catalog_; }

    StatementResult execute_sql(const std::string& sql);
    StatementResult execute(const sql::Statement& stmt);

    /// Full pipeline up to the bound hybrid plan (SELECT only).
    opt::HybridPlan plan_query(const sql::Statement& stmt);

    std::string explain_sql(const std::string& sql);

    /// Executes a ';'-separated script; stops at the first failure.
    void run_script(const std::string& text);

  private:
    Config config_;
    Catalog catalog_;
};

} // namespace qdb
