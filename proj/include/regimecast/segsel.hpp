#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "regimecast/changepoint.hpp"
#include "regimecast/date.hpp"
#include "regimecast/ingest.hpp"
#include "regimecast/topics.hpp"

namespace regimecast {

struct Segment {
    Date start;
    Date end;
    std::string source_topic;
};

enum class SegmentationMode { Midpoint, Direct };
enum class ScoreDirection { Paper, Similarity };

struct SimilarityBreakdown {
    std::string topic;
    double pw = 0.0;        // |pearson_r| * (1 - p), in [0,1]
    double cs = 0.0;        // cosine distance, in [0,2]
    double nd = 0.0;        // normalized DTW, in [0,1]
    double pearson_r = 0.0;
    double pearson_p = 1.0;
    double dtw_raw = 0.0;
    double w = 0.0;         // alpha*pw + beta*nd + gamma*cs
    bool zero_variance = false;
};

struct DatasetCharacteristics {
    double size = 0.0;
    double volatility = 0.0;
    double noise = 0.0;
    double trend_strength = 0.0;
    double periodicity = 0.0;
};

struct CoefficientSet {
    double alpha = 0.0, beta = 0.0, gamma = 0.0;
    DatasetCharacteristics characteristics;
};

struct SegmentScore {
    Segment segment;
    std::vector<SimilarityBreakdown> per_topic;
    double total = 0.0;
    int rank = 0;
};

/// Cuts `range` at the midpoints of consecutive breakpoints (Midpoint mode)
/// or at the breakpoints themselves (Direct mode); segments shorter than
/// `min_span_days` are merged into their predecessor. No breakpoints yields
/// one segment covering the range.
std::vector<Segment> midpoint_segments(const BreakpointSet& breakpoints, DateRange range,
                                       std::int64_t min_span_days,
                                       SegmentationMode mode = SegmentationMode::Midpoint);

struct PearsonWeight {
    double pw = 0.0;
    double r = 0.0;
    double p = 1.0;
    bool zero_variance = false;
};

/// pw = |r| * (1 - p); p is the two-sided p-value of r from the
/// t-distribution with n-2 degrees of freedom. Zero-variance input gives
/// pw = 0 with a flag.
PearsonWeight pearson_weight(const std::vector<double>& t_series,
                             const std::vector<double>& s_series);

/// cs = 1 - (T.S)/(|T||S|); a zero vector is an error.
double cosine_distance(const std::vector<double>& t_series, const std::vector<double>& s_series);

/// Classic DTW with absolute-difference local cost and match/insert/delete
/// steps. `band` (when set) is a Sakoe-Chiba constraint on |i - j|.
double dtw(const std::vector<double>& a, const std::vector<double>& b,
           std::optional<std::size_t> band = std::nullopt);

enum class NdMode { Paper, PathLength };

/// Paper mode: nd = 1 - dtw/max(dtw, 1); saturates to 0 once dtw >= 1.
/// PathLength mode divides dtw by the longer series length first.
double normalized_dtw(const std::vector<double>& forecast, const std::vector<double>& segment,
                      NdMode mode = NdMode::Paper);

/// Logistic calibration of the metric weights from dataset characteristics:
///   alpha = 0.6 * logistic(7.8 * (log10(size) - 3.2))
///   beta  = (1 - alpha) * logistic(2.4 * (noise/trend_strength - 1))
///   gamma = 1 - alpha - beta
CoefficientSet solve_coefficients(const DatasetCharacteristics& characteristics);

/// Characteristics of a percentage-change series, as fed to
/// solve_coefficients.
DatasetCharacteristics dataset_characteristics(const std::vector<double>& pct_change);

/// Per-topic PW/CS/ND and combined weights over the segment's dates; series
/// are min-max normalized to [0,1] before metric computation. `forecasts[i]`
/// is the forecast trend for topic i over the target horizon.
SegmentScore score_segment(const Segment& segment, const std::vector<TopicSeries>& topics,
                           const StockSeries& stock,
                           const std::vector<std::vector<double>>& forecasts,
                           const CoefficientSet& coeffs);

/// Paper direction: ascending total (lowest first); Similarity direction:
/// descending. Ties break toward the later start date.
std::vector<SegmentScore> rank_segments(std::vector<SegmentScore> scores,
                                        ScoreDirection direction = ScoreDirection::Paper);

void save_segment_scores(const std::vector<SegmentScore>& ranked, const std::string& score_path,
                         const std::string& breakdown_path);

std::vector<double> min_max_normalize(const std::vector<double>& values);

}  // namespace regimecast
