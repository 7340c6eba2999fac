#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "regimecast/date.hpp"

namespace regimecast {

/// penalty < 0 and kernel_bandwidth <= 0 mean AUTO.
struct PeltConfig {
    double penalty = -1.0;
    std::size_t min_segment_length = 2;
    double kernel_bandwidth = 0.0;
};

struct BreakpointSet {
    std::vector<std::size_t> indices;  // strictly increasing, each in (0, n)
    std::vector<Date> dates;           // filled when a calendar is supplied
    double objective = 0.0;            // final optimal cost incl. penalties
};

/// AUTO bandwidth: 1 / median of pairwise squared differences over the whole
/// series (1.0 when the median is zero).
double auto_bandwidth(const std::vector<double>& series);

/// BIC-style default: 2*log(n) scaled by the unsplit series' cost per sample.
double default_penalty(const std::vector<double>& series, double bandwidth);

/// Kernel segment cost over (a, b]:
///   c(a,b) = (b-a) - (1/(b-a)) * sum_{s,t in (a,b]} exp(-bw*(y_s-y_t)^2)
/// Evaluated by the direct double sum.
double rbf_cost(const std::vector<double>& series, std::size_t a, std::size_t b,
                double bandwidth);

/// Pruned exact dynamic program minimizing
///   sum of segment costs + penalty * (#breakpoints),
/// with no preset breakpoint count. Candidate starts s with
/// F(s) + c(s,t) > F(t) are pruned.
BreakpointSet pelt(const std::vector<double>& series, const PeltConfig& config,
                   const std::vector<Date>* calendar = nullptr);

struct BreakpointEval {
    double precision = 0.0;
    double recall = 0.0;
    double f_score = 0.0;
    std::size_t true_positives = 0;
    bool degenerate = false;  // reference set empty while detections exist
};

/// One-to-one greedy nearest-first matching within `tolerance_days`.
BreakpointEval evaluate_breakpoints(const std::vector<Date>& detected,
                                    const std::vector<Date>& reference,
                                    std::int64_t tolerance_days);

std::vector<Date> load_reference_events(const std::string& path);

}  // namespace regimecast
