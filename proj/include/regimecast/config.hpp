#pragma once

#include <optional>
#include <string>
#include <vector>

#include "regimecast/changepoint.hpp"
#include "regimecast/clustering.hpp"
#include "regimecast/forecast.hpp"
#include "regimecast/ingest.hpp"
#include "regimecast/llm_client.hpp"
#include "regimecast/segsel.hpp"

namespace regimecast {

enum class WeekendPolicy { Roll, Drop };
enum class TopicCountMode { Articles, Keywords };
enum class ReducerKind { Pca, External };
enum class LabelerKind { Stub, Llm };

struct RunConfig {
    // paths
    std::string corpus_path;
    std::string vectors_path;          // raw embeddings (reducer = pca)
    std::string reduced_vectors_path;  // externally reduced (reducer = external)
    std::string stock_path;            // delimited date,close file
    std::string stock_source;          // finance endpoint or JSON fixture (optional)
    std::string stock_symbol;
    std::string reference_events_path;  // optional, for breakpoint evaluation
    std::string output_dir = "run";

    // stage parameters
    std::vector<std::string> section_whitelist{"politics", "economy",  "business", "washington",
                                               "world",    "national", "u.s."};
    ReducerKind reducer = ReducerKind::Pca;
    std::size_t n_components = 5;
    HdbscanParams hdbscan;
    std::size_t top_keywords = 20;
    LabelerKind labeler = LabelerKind::Stub;
    LlmConfig llm;
    TopicCountMode count_mode = TopicCountMode::Articles;
    WeekendPolicy weekend_policy = WeekendPolicy::Roll;
    std::size_t smoothing_window = 1;
    PeltConfig pelt;
    std::int64_t breakpoint_tolerance_days = 10;
    std::string breakpoint_topic;  // topic label, or "auto-variance"
    SegmentationMode segmentation_mode = SegmentationMode::Midpoint;
    std::int64_t min_segment_span_days = 30;
    ScoreDirection score_direction = ScoreDirection::Paper;
    NdMode nd_mode = NdMode::Paper;
    ForecastConfig forecast;
    bool observed_regressors = false;  // replication mode: use ground-truth test regressors
    std::optional<SplitProportions> split_proportions;
    std::uint64_t seed = 0;

    static RunConfig from_json_file(const std::string& path);
    static RunConfig from_json_text(const std::string& text);
    std::string to_json_text() const;

    /// Hash of the serialized config, used for manifest idempotence checks.
    std::string config_hash() const;

    void validate() const;  // referenced paths must exist, parameters in range
};

}  // namespace regimecast
