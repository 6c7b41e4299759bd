#pragma once

#include "rat.hpp"

#include <json.hpp>

#include <optional>
#include <string>

namespace ck {

using Json = nlohmann::json; // object keys are kept sorted: canonical output

// Canonical serialization used everywhere a report is emitted or cached:
// sorted keys, two-space indentation, trailing newline, fractions as strings.
std::string report_bytes(const Json& report);

// Disk cache for reports. Entries are keyed by a canonical parameter string
// and carry the engine version; a version bump invalidates them. Concurrent
// invocations are safe via advisory file locks. All failures degrade to
// warnings on stderr and recomputation.
class ReportCache {
public:
    // dir empty: cache disabled. env_override (when set) names an environment
    // variable whose value replaces dir.
    explicit ReportCache(std::string dir);

    bool enabled() const { return !dir_.empty(); }
    std::optional<std::string> load(const std::string& key) const;
    void store(const std::string& key, const std::string& bytes) const;

private:
    std::string dir_;
};

// Report builders shared by the CLI and the golden-file tests. Each returns
// the canonical report object; `verified` inside tells whether every internal
// certification passed.
Json report_search_invariant(int n, const Rat& lam, const Rat& mu, const Rat& nu, int max_order,
                             bool grading_filter);
Json report_h1(int n, const Rat& lam, const Rat& mu, int max_order, int relative_i,
               bool all_sectors);
Json report_catalog(int n, const std::optional<Rat>& lam, const std::optional<Rat>& mu,
                    const std::optional<Rat>& nu);
Json report_list_cocycles(int n);
Json report_verify_cocycle(const std::string& name, int n, const Rat& lam, int dmax);
Json report_verify_bracket(int n, int dmax);
Json report_verify_action(int n, int dmax);
Json report_verify_poisson(int n, const std::vector<Rat>& weights);

// canonical cache key for a report (command plus sorted params)
std::string cache_key(const Json& report);

} // namespace ck
