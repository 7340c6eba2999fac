#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "regimecast/config.hpp"

namespace regimecast {

/// Pipeline stages in dependency order.
enum class Stage {
    Ingest,
    Reduce,
    Cluster,
    Label,
    Series,
    Breakpoints,
    SegmentStage,
    Select,
    Forecast,
    Evaluate,
    Ablate,
};

const std::vector<Stage>& all_stages();
std::string stage_name(Stage s);
Stage parse_stage(const std::string& name);

class StageError : public std::runtime_error {
public:
    StageError(const std::string& what, const std::string& required_stage)
        : std::runtime_error(what), required_stage_(required_stage) {}
    const std::string& required_stage() const { return required_stage_; }

private:
    std::string required_stage_;
};

/// Runs one stage, writing its artifacts and a manifest (input hashes +
/// config hash) into the run directory. Reruns with unchanged inputs are
/// skipped unless `force`. Returns false when skipped as up-to-date.
bool run_stage(Stage stage, const RunConfig& config, bool force, std::ostream& log);

/// Runs every stage in order.
void run_pipeline(const RunConfig& config, bool force, std::ostream& log);

}  // namespace regimecast
