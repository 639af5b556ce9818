#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>

#include "smapi/platform.hpp"
#include "smapi/rate_budget.hpp"

namespace smapi {

// Service configuration: one JSON file plus environment overrides
// (SMAPI_PORT, SMAPI_FIXTURE_DIR, SMAPI_ENRICHMENT_DIR, SMAPI_STORE_PATH).
struct ServiceConfig {
    std::string host = "0.0.0.0";
    int port = 8750;
    std::filesystem::path fixture_dir = "data/fixtures";
    std::filesystem::path enrichment_dir = "data/config";
    std::filesystem::path store_path; // empty = in-memory store
    double default_radius_km = 10.0;
    std::size_t default_page_count = 100;
    std::map<Platform, BudgetLedger::Limits> budgets;
    std::map<Platform, std::size_t> max_results_overrides;

    static ServiceConfig defaults();
    static ServiceConfig load(const std::filesystem::path& file);

    void apply_env_overrides();
};

} // namespace smapi
