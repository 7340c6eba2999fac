#include "regimecast/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <functional>
#include <fstream>
#include <map>
#include <ostream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "regimecast/metrics.hpp"
#include "regimecast/plot.hpp"
#include "regimecast/stock_client.hpp"

namespace regimecast {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr const char* kVersion = "1";

const std::vector<std::pair<Stage, const char*>> kStageNames = {
    {Stage::Ingest, "ingest"},         {Stage::Reduce, "reduce"},
    {Stage::Cluster, "cluster"},       {Stage::Label, "label"},
    {Stage::Series, "series"},         {Stage::Breakpoints, "breakpoints"},
    {Stage::SegmentStage, "segment"},  {Stage::Select, "select"},
    {Stage::Forecast, "forecast"},     {Stage::Evaluate, "evaluate"},
    {Stage::Ablate, "ablate"},
};

std::string file_hash(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot hash missing file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return fnv1a_hex(ss.str());
}

struct RunDir {
    fs::path root;

    explicit RunDir(const RunConfig& c) : root(c.output_dir) {
        fs::create_directories(root / "manifest");
    }
    std::string path(const char* name) const { return (root / name).string(); }
    bool has(const char* name) const { return fs::exists(root / name); }
};

// artifact names
constexpr const char* kArticles = "articles.tsv";
constexpr const char* kStock = "stock.tsv";
constexpr const char* kSplits = "splits.json";
constexpr const char* kReduced = "reduced.tsv";
constexpr const char* kClusters = "clusters.tsv";
constexpr const char* kTopics = "topics.tsv";
constexpr const char* kTopicSeries = "topic_series.tsv";
constexpr const char* kBreakpoints = "breakpoints.tsv";
constexpr const char* kSegments = "segments.tsv";
constexpr const char* kCoefficients = "coefficients.tsv";
constexpr const char* kScores = "segment_scores.tsv";
constexpr const char* kBreakdown = "segment_breakdown.tsv";
constexpr const char* kModel = "model.txt";
constexpr const char* kForecast = "forecast.tsv";
constexpr const char* kForecastPlot = "forecast_vs_actual.svg";
constexpr const char* kReport = "report.tsv";
constexpr const char* kBreakpointEval = "breakpoint_eval.tsv";
constexpr const char* kAblation = "ablation.tsv";
constexpr const char* kAblationPlot = "ablation.svg";

void require_artifact(const RunDir& dir, const char* name, const char* produced_by) {
    if (!dir.has(name))
        throw StageError(std::string("missing artifact '") + name + "'; run the '" + produced_by +
                             "' stage first",
                         produced_by);
}

// ---- artifact serialization helpers ----

void save_articles(const std::vector<Article>& articles, const std::string& path) {
    std::ofstream out(path);
    out << "date\theadline\tsection\tkeywords\n";
    for (const auto& a : articles) {
        out << a.date.to_string() << '\t' << a.headline << '\t' << a.section << "\t[";
        for (std::size_t i = 0; i < a.keywords.size(); ++i)
            out << (i ? ", '" : "'") << a.keywords[i] << "'";
        out << "]\n";
    }
}

void save_stock(const StockSeries& s, const std::string& path) {
    std::ofstream out(path);
    out.precision(17);
    out << "date\tclose\tpct_change\n";
    for (std::size_t i = 0; i < s.dates.size(); ++i)
        out << s.dates[i].to_string() << '\t' << s.closes[i] << '\t' << s.pct_change[i] << '\n';
}

StockSeries load_stock_artifact(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    std::string line;
    std::getline(in, line);
    StockSeries s;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::istringstream ss(line);
        std::string d;
        double close, pct;
        ss >> d >> close >> pct;
        s.dates.push_back(Date::parse(d));
        s.closes.push_back(close);
        s.pct_change.push_back(pct);
    }
    return s;
}

void save_splits(const SplitSpec& spec, const std::string& path) {
    json j;
    auto range = [](DateRange r) {
        return json{{"start", r.start.to_string()}, {"end", r.end.to_string()}};
    };
    j["train"] = range(spec.train);
    j["train_val"] = range(spec.train_val);
    j["test"] = range(spec.test);
    j["test_val"] = range(spec.test_val);
    auto shares = split_shares(spec);
    j["shares"] = {{"train", shares[0]}, {"train_val", shares[1]}, {"test", shares[2]},
                   {"test_val", shares[3]}};
    std::ofstream out(path);
    out << j.dump(2) << "\n";
}

SplitSpec load_splits(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    json j = json::parse(in);
    auto range = [&](const char* key) {
        return DateRange{Date::parse(j.at(key).at("start").get<std::string>()),
                         Date::parse(j.at(key).at("end").get<std::string>())};
    };
    return SplitSpec{range("train"), range("train_val"), range("test"), range("test_val")};
}

void save_topics(const std::vector<TopicCluster>& topics, const std::string& path) {
    std::ofstream out(path);
    out << "cluster_id\tlabel\ttop_keywords\tmember_keywords\n";
    auto join = [](const auto& words) {
        std::string s;
        for (const auto& w : words) {
            if (!s.empty()) s += ',';
            s += w;
        }
        return s;
    };
    for (const auto& t : topics)
        out << t.cluster_id << '\t' << t.label << '\t' << join(t.top_keywords) << '\t'
            << join(t.member_keywords) << '\n';
}

std::vector<TopicCluster> load_topics(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    std::string line;
    std::getline(in, line);
    std::vector<TopicCluster> out;
    auto split_commas = [](const std::string& s) {
        std::vector<std::string> words;
        std::istringstream ss(s);
        std::string w;
        while (std::getline(ss, w, ',')) words.push_back(w);
        return words;
    };
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::vector<std::string> cols;
        std::size_t start = 0;
        for (int i = 0; i < 3; ++i) {
            auto tab = line.find('\t', start);
            cols.push_back(line.substr(start, tab - start));
            start = tab + 1;
        }
        cols.push_back(line.substr(start));
        TopicCluster t;
        t.cluster_id = std::stoi(cols[0]);
        t.label = cols[1];
        t.top_keywords = split_commas(cols[2]);
        auto members = split_commas(cols[3]);
        t.member_keywords.insert(members.begin(), members.end());
        out.push_back(std::move(t));
    }
    return out;
}

void save_breakpoints(const std::string& topic, const BreakpointSet& bp,
                      const std::string& path) {
    std::ofstream out(path);
    out << "topic\tindex\tdate\n";
    for (std::size_t i = 0; i < bp.indices.size(); ++i)
        out << topic << '\t' << bp.indices[i] << '\t' << bp.dates[i].to_string() << '\n';
}

std::pair<std::string, BreakpointSet> load_breakpoints(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    std::string line;
    std::getline(in, line);
    BreakpointSet bp;
    std::string topic;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::istringstream ss(line);
        std::size_t idx;
        std::string d;
        ss >> topic >> idx >> d;
        bp.indices.push_back(idx);
        bp.dates.push_back(Date::parse(d));
    }
    return {topic, bp};
}

void save_segments(const std::vector<Segment>& segments, const std::string& path) {
    std::ofstream out(path);
    out << "index\tstart\tend\tsource_topic\n";
    for (std::size_t i = 0; i < segments.size(); ++i)
        out << (i + 1) << '\t' << segments[i].start.to_string() << '\t'
            << segments[i].end.to_string() << '\t' << segments[i].source_topic << '\n';
}

std::vector<Segment> load_segments(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    std::string line;
    std::getline(in, line);
    std::vector<Segment> out;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::istringstream ss(line);
        std::size_t idx;
        std::string start, end, topic;
        ss >> idx >> start >> end >> topic;
        out.push_back({Date::parse(start), Date::parse(end), topic});
    }
    return out;
}

// Trading dates of `stock` restricted to `range`, plus their pct values.
void stock_window(const StockSeries& stock, DateRange range, std::vector<Date>& dates,
                  std::vector<double>& pct) {
    dates.clear();
    pct.clear();
    for (std::size_t i = 0; i < stock.dates.size(); ++i)
        if (range.contains(stock.dates[i])) {
            dates.push_back(stock.dates[i]);
            pct.push_back(stock.pct_change[i]);
        }
}

std::vector<TopicSeries> aligned_topics(const std::vector<TopicSeries>& daily,
                                        const std::vector<Date>& trading_dates,
                                        const RunConfig& cfg) {
    std::vector<TopicSeries> out;
    out.reserve(daily.size());
    for (const auto& t : daily)
        out.push_back(align_topic_to_dates(t, trading_dates,
                                           cfg.weekend_policy == WeekendPolicy::Roll));
    return out;
}

TopicSeries slice_series(const TopicSeries& s, DateRange range) {
    TopicSeries out;
    out.topic = s.topic;
    for (std::size_t i = 0; i < s.dates.size(); ++i)
        if (range.contains(s.dates[i])) {
            out.dates.push_back(s.dates[i]);
            out.counts.push_back(s.counts[i]);
        }
    return out;
}

const TopicSeries& pick_breakpoint_topic(const std::vector<TopicSeries>& series,
                                         const std::string& wanted) {
    if (wanted.empty() || wanted == "auto-variance") {
        const TopicSeries* best = nullptr;
        double best_var = -1.0;
        for (const auto& s : series) {
            double m = 0.0;
            for (double v : s.counts) m += v;
            m /= static_cast<double>(s.counts.size());
            double var = 0.0;
            for (double v : s.counts) var += (v - m) * (v - m);
            if (var > best_var) {
                best_var = var;
                best = &s;
            }
        }
        if (!best) throw std::runtime_error("no topic series available");
        return *best;
    }
    for (const auto& s : series)
        if (s.topic == wanted) return s;
    throw std::runtime_error("breakpoint_topic '" + wanted + "' not found among topic series");
}

// ---- per-stage input/output declarations for the manifest ----

struct StageIo {
    std::vector<std::string> inputs;   // absolute/relative file paths to hash
    std::vector<const char*> outputs;  // artifact names in the run dir
};

StageIo stage_io(Stage stage, const RunConfig& c, const RunDir& dir) {
    StageIo io;
    auto art = [&](const char* name) { return dir.path(name); };
    switch (stage) {
        case Stage::Ingest:
            if (!c.corpus_path.empty()) io.inputs.push_back(c.corpus_path);
            if (!c.stock_path.empty()) io.inputs.push_back(c.stock_path);
            io.outputs = {kArticles, kStock, kSplits};
            break;
        case Stage::Reduce:
            io.inputs.push_back(c.reducer == ReducerKind::Pca ? c.vectors_path
                                                              : c.reduced_vectors_path);
            io.outputs = {kReduced};
            break;
        case Stage::Cluster:
            io.inputs.push_back(art(kReduced));
            io.outputs = {kClusters};
            break;
        case Stage::Label:
            io.inputs = {art(kClusters), art(kArticles)};
            io.outputs = {kTopics};
            break;
        case Stage::Series:
            io.inputs = {art(kTopics), art(kArticles), art(kSplits)};
            io.outputs = {kTopicSeries};
            break;
        case Stage::Breakpoints:
            io.inputs = {art(kTopicSeries), art(kStock), art(kSplits)};
            io.outputs = {kBreakpoints};
            break;
        case Stage::SegmentStage:
            io.inputs = {art(kBreakpoints), art(kSplits)};
            io.outputs = {kSegments};
            break;
        case Stage::Select:
            io.inputs = {art(kSegments), art(kTopicSeries), art(kStock), art(kSplits)};
            io.outputs = {kCoefficients, kScores, kBreakdown};
            break;
        case Stage::Forecast:
            io.inputs = {art(kScores), art(kTopicSeries), art(kStock), art(kSplits)};
            io.outputs = {kModel, kForecast, kForecastPlot};
            break;
        case Stage::Evaluate:
            io.inputs = {art(kForecast), art(kScores), art(kStock), art(kSplits)};
            if (!c.reference_events_path.empty()) {
                io.inputs.push_back(c.reference_events_path);
                io.inputs.push_back(art(kBreakpoints));
            }
            io.outputs = {kReport, kBreakpointEval};
            break;
        case Stage::Ablate:
            io.inputs = {art(kScores), art(kTopicSeries), art(kStock), art(kSplits)};
            io.outputs = {kAblation, kAblationPlot};
            break;
    }
    return io;
}

// ---- stage bodies ----

void do_ingest(const RunConfig& c, const RunDir& dir, std::ostream& log) {
    if (c.corpus_path.empty()) throw std::runtime_error("config: paths.corpus is required");
    PreprocessReport rep;
    auto articles = load_corpus(c.corpus_path, &rep);
    std::set<std::string> whitelist(c.section_whitelist.begin(), c.section_whitelist.end());
    auto kept = preprocess_corpus(articles, whitelist, &rep);
    save_articles(kept, dir.path(kArticles));
    log << "ingest: " << kept.size() << " articles kept (" << rep.removed_empty_keywords
        << " removed empty-keywords, " << rep.removed_by_section << " removed by section, "
        << rep.removed_duplicates << " duplicates)\n";

    std::vector<Date> dates;
    std::vector<double> closes;
    if (!c.stock_path.empty()) {
        load_stock_closes(c.stock_path, dates, closes);
    } else if (!c.stock_source.empty()) {
        DateRange wide{Date(1970, 1, 1), Date(2100, 1, 1)};
        auto hist = fetch_stock_history(c.stock_symbol, wide, c.stock_source);
        dates = hist.dates;
        closes = hist.closes;
    } else {
        throw std::runtime_error("config: paths.stock or paths.stock_source is required");
    }
    StockSeries stock = compute_pct_change(dates, closes);
    save_stock(stock, dir.path(kStock));

    DateRange full{stock.dates.front(), stock.dates.back()};
    SplitSpec splits;
    if (c.split_proportions) {
        splits = make_splits(full, c.split_proportions);
    } else {
        try {
            splits = make_splits(full);
        } catch (const std::invalid_argument&) {
            log << "ingest: range does not cover the default split boundaries; "
                   "using 74/4/20/2 proportions\n";
            splits = make_splits(full, SplitProportions{});
        }
    }
    save_splits(splits, dir.path(kSplits));
}

void do_reduce(const RunConfig& c, const RunDir& dir, std::ostream& log) {
    if (c.reducer == ReducerKind::Pca) {
        if (c.vectors_path.empty()) throw std::runtime_error("config: paths.vectors is required");
        auto table = load_vectors(c.vectors_path);
        log << "reduce: loaded " << table.size() << " vectors of dim " << table.dim << "\n";
        auto reduced = pca_reduce(table, std::min(c.n_components, table.dim));
        save_vectors(reduced, dir.path(kReduced));
    } else {
        if (c.reduced_vectors_path.empty())
            throw std::runtime_error("config: paths.reduced_vectors is required");
        std::vector<std::string> warnings;
        auto reduced = load_reduced(c.reduced_vectors_path, c.n_components, &warnings);
        for (const auto& w : warnings) log << "reduce: " << w << "\n";
        save_vectors(reduced, dir.path(kReduced));
    }
}

void do_cluster(const RunConfig& c, const RunDir& dir, std::ostream& log) {
    require_artifact(dir, kReduced, "reduce");
    auto reduced = load_vectors(dir.path(kReduced));
    auto result = hdbscan(reduced, c.hdbscan);
    save_cluster_dump(result, dir.path(kClusters));
    std::size_t noise = 0;
    for (const auto& [kw, id] : result.labels)
        if (id == kNoise) ++noise;
    log << "cluster: " << result.cluster_count << " clusters, " << noise << " noise points\n";
}

ClusterResult load_cluster_dump(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    std::string line;
    std::getline(in, line);
    ClusterResult out;
    int max_id = -1;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        auto t1 = line.find('\t');
        auto t2 = line.find('\t', t1 + 1);
        std::string kw = line.substr(0, t1);
        int id = std::stoi(line.substr(t1 + 1, t2 - t1 - 1));
        out.labels[kw] = id;
        out.probabilities[kw] = std::stod(line.substr(t2 + 1));
        max_id = std::max(max_id, id);
    }
    out.cluster_count = max_id + 1;
    return out;
}

void do_label(const RunConfig& c, const RunDir& dir, std::ostream& log) {
    require_artifact(dir, kClusters, "cluster");
    require_artifact(dir, kArticles, "ingest");
    auto clusters = load_cluster_dump(dir.path(kClusters));
    auto articles = load_corpus(dir.path(kArticles));
    std::function<std::string(const std::vector<std::string>&)> labeler;
    if (c.labeler == LabelerKind::Stub) {
        labeler = label_cluster_stub;
    } else {
        LlmConfig llm = c.llm;
        if (llm.cache_dir.empty()) llm.cache_dir = (dir.root / "label_cache").string();
        labeler = [llm](const std::vector<std::string>& kws) {
            return label_cluster_llm(kws, llm);
        };
    }
    auto topics = make_topic_clusters(clusters, articles, c.top_keywords, labeler);
    save_topics(topics, dir.path(kTopics));
    for (const auto& t : topics) log << "label: cluster " << t.cluster_id << " -> " << t.label << "\n";
}

void do_series(const RunConfig& c, const RunDir& dir, std::ostream& log) {
    require_artifact(dir, kTopics, "label");
    require_artifact(dir, kArticles, "ingest");
    require_artifact(dir, kSplits, "ingest");
    auto topics = load_topics(dir.path(kTopics));
    auto articles = load_corpus(dir.path(kArticles));
    auto splits = load_splits(dir.path(kSplits));
    auto calendar = daily_calendar({splits.train.start, splits.test_val.end});
    auto series = build_topic_series(articles, topics, calendar,
                                     c.count_mode == TopicCountMode::Keywords);
    if (c.smoothing_window > 1)
        for (auto& s : series) s = smooth_series(s, c.smoothing_window);
    save_topic_series(series, dir.path(kTopicSeries));
    log << "series: " << series.size() << " topic series over " << calendar.size() << " days\n";
}

void do_breakpoints(const RunConfig& c, const RunDir& dir, std::ostream& log) {
    require_artifact(dir, kTopicSeries, "series");
    require_artifact(dir, kStock, "ingest");
    require_artifact(dir, kSplits, "ingest");
    auto series = load_topic_series(dir.path(kTopicSeries));
    auto stock = load_stock_artifact(dir.path(kStock));
    auto splits = load_splits(dir.path(kSplits));

    const TopicSeries& chosen = pick_breakpoint_topic(series, c.breakpoint_topic);
    std::vector<Date> train_dates;
    std::vector<double> train_pct;
    stock_window(stock, splits.train, train_dates, train_pct);
    TopicSeries aligned = align_topic_to_dates(slice_series(chosen, splits.train), train_dates,
                                               c.weekend_policy == WeekendPolicy::Roll);
    auto bp = pelt(aligned.counts, c.pelt, &aligned.dates);
    save_breakpoints(chosen.topic, bp, dir.path(kBreakpoints));
    log << "breakpoints: topic '" << chosen.topic << "', " << bp.indices.size()
        << " breakpoints, objective " << bp.objective << "\n";
}

void do_segment(const RunConfig& c, const RunDir& dir, std::ostream& log) {
    require_artifact(dir, kBreakpoints, "breakpoints");
    require_artifact(dir, kSplits, "ingest");
    auto [topic, bp] = load_breakpoints(dir.path(kBreakpoints));
    auto splits = load_splits(dir.path(kSplits));
    auto segments = midpoint_segments(bp, splits.train, c.min_segment_span_days,
                                      c.segmentation_mode);
    for (auto& s : segments) s.source_topic = topic;
    save_segments(segments, dir.path(kSegments));
    log << "segment: " << segments.size() << " segments\n";
}

void save_coefficients(const CoefficientSet& cs, const std::string& path) {
    std::ofstream out(path);
    out.precision(10);
    out << "alpha\tbeta\tgamma\tsize\tvolatility\tnoise\ttrend_strength\tperiodicity\n";
    out << cs.alpha << '\t' << cs.beta << '\t' << cs.gamma << '\t' << cs.characteristics.size
        << '\t' << cs.characteristics.volatility << '\t' << cs.characteristics.noise << '\t'
        << cs.characteristics.trend_strength << '\t' << cs.characteristics.periodicity << '\n';
}

void do_select(const RunConfig& c, const RunDir& dir, std::ostream& log) {
    require_artifact(dir, kSegments, "segment");
    require_artifact(dir, kTopicSeries, "series");
    require_artifact(dir, kStock, "ingest");
    require_artifact(dir, kSplits, "ingest");
    auto segments = load_segments(dir.path(kSegments));
    auto series = load_topic_series(dir.path(kTopicSeries));
    auto stock = load_stock_artifact(dir.path(kStock));
    auto splits = load_splits(dir.path(kSplits));

    // weights calibrated on the validation window's stock characteristics
    std::vector<Date> val_dates;
    std::vector<double> val_pct;
    stock_window(stock, splits.train_val, val_dates, val_pct);
    if (val_pct.size() < 3) stock_window(stock, splits.train, val_dates, val_pct);
    auto coeffs = solve_coefficients(dataset_characteristics(val_pct));
    save_coefficients(coeffs, dir.path(kCoefficients));
    log << "select: alpha=" << coeffs.alpha << " beta=" << coeffs.beta
        << " gamma=" << coeffs.gamma << "\n";

    // forecast each topic's trend over the validation horizon
    std::vector<TopicSeries> train_topics;
    for (const auto& s : series) train_topics.push_back(slice_series(s, splits.train));
    auto tf = forecast_topic_trends(train_topics, val_dates, c.forecast);
    for (const auto& w : tf.warnings) log << "select: warning: " << w << "\n";
    std::vector<std::vector<double>> forecasts;
    for (const auto& f : tf.forecasts) forecasts.push_back(f.yhat);

    std::vector<Date> all_dates;
    std::vector<double> all_pct;
    stock_window(stock, {splits.train.start, splits.test_val.end}, all_dates, all_pct);
    auto aligned = aligned_topics(series, all_dates, c);

    std::vector<SegmentScore> scores;
    for (const auto& seg : segments)
        scores.push_back(score_segment(seg, aligned, stock, forecasts, coeffs));
    auto ranked = rank_segments(std::move(scores), c.score_direction);
    save_segment_scores(ranked, dir.path(kScores), dir.path(kBreakdown));
    log << "select: best segment " << ranked.front().segment.start.to_string() << ".."
        << ranked.front().segment.end.to_string() << " (total "
        << ranked.front().total << ")\n";
}

DateRange best_segment_range(const std::string& scores_path) {
    std::ifstream in(scores_path);
    if (!in) throw std::runtime_error("cannot open " + scores_path);
    std::string line;
    std::getline(in, line);
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::istringstream ss(line);
        std::size_t idx;
        std::string start, end, total;
        int rank;
        ss >> idx >> start >> end >> total >> rank;
        if (rank == 1) return {Date::parse(start), Date::parse(end)};
    }
    throw std::runtime_error("no rank-1 segment in " + scores_path);
}

void do_forecast(const RunConfig& c, const RunDir& dir, std::ostream& log) {
    require_artifact(dir, kScores, "select");
    require_artifact(dir, kTopicSeries, "series");
    require_artifact(dir, kStock, "ingest");
    require_artifact(dir, kSplits, "ingest");
    auto series = load_topic_series(dir.path(kTopicSeries));
    auto stock = load_stock_artifact(dir.path(kStock));
    auto splits = load_splits(dir.path(kSplits));
    DateRange best = best_segment_range(dir.path(kScores));

    std::vector<Date> train_dates;
    std::vector<double> train_pct;
    stock_window(stock, best, train_dates, train_pct);
    auto regressors = aligned_topics(series, train_dates, c);
    AdditiveModel model = fit(train_dates, train_pct, regressors, c.forecast);
    save_model(model, dir.path(kModel));

    std::vector<Date> test_dates;
    std::vector<double> test_pct;
    stock_window(stock, splits.test, test_dates, test_pct);

    std::map<std::string, std::vector<double>> future;
    if (c.observed_regressors) {
        for (const auto& t : aligned_topics(series, test_dates, c)) future[t.topic] = t.counts;
    } else {
        std::vector<TopicSeries> hist;
        for (const auto& s : series) hist.push_back(slice_series(s, splits.train));
        auto tf = forecast_topic_trends(hist, test_dates, c.forecast);
        for (const auto& w : tf.warnings) log << "forecast: warning: " << w << "\n";
        for (std::size_t i = 0; i < series.size(); ++i) future[series[i].topic] = tf.forecasts[i].yhat;
    }
    ForecastSeries fc = predict(model, test_dates, &future);
    save_forecast(fc, dir.path(kForecast));
    emit_plot({{"actual", test_pct}, {"forecast", fc.yhat}}, dir.path(kForecastPlot),
              "Forecast vs actual (" + splits.test.start.to_string() + ".." +
                  splits.test.end.to_string() + ")");
    log << "forecast: " << fc.dates.size() << " predictions over test window\n";
}

ForecastSeries load_forecast_artifact(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    std::string line;
    std::getline(in, line);
    ForecastSeries f;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::istringstream ss(line);
        std::string d;
        double yhat, trend, seasonal, reg;
        ss >> d >> yhat >> trend >> seasonal >> reg;
        f.dates.push_back(Date::parse(d));
        f.yhat.push_back(yhat);
        f.trend.push_back(trend);
        f.seasonal.push_back(seasonal);
        f.regressor.push_back(reg);
    }
    return f;
}

void do_evaluate(const RunConfig& c, const RunDir& dir, std::ostream& log) {
    require_artifact(dir, kForecast, "forecast");
    require_artifact(dir, kScores, "select");
    require_artifact(dir, kStock, "ingest");
    require_artifact(dir, kSplits, "ingest");
    auto stock = load_stock_artifact(dir.path(kStock));
    auto splits = load_splits(dir.path(kSplits));
    auto fc = load_forecast_artifact(dir.path(kForecast));

    std::vector<Date> test_dates;
    std::vector<double> test_pct;
    stock_window(stock, splits.test, test_dates, test_pct);
    if (test_dates.size() != fc.dates.size())
        throw std::runtime_error("forecast/test window length mismatch");
    auto topic_rep = regression_metrics(test_pct, fc.yhat);

    // stock-only baseline over the full training span
    std::vector<Date> train_dates;
    std::vector<double> train_pct;
    stock_window(stock, splits.train, train_dates, train_pct);
    AdditiveModel baseline = fit(train_dates, train_pct, {}, c.forecast);
    auto base_fc = predict(baseline, test_dates);
    auto base_rep = regression_metrics(test_pct, base_fc.yhat);

    std::ofstream out(dir.path(kReport));
    out << "config\tspan\tMAE\tMSE\tRMSE\tR2\n";
    char buf[128];
    auto row = [&](const std::string& name, DateRange span, const RegressionReport& r) {
        std::snprintf(buf, sizeof(buf), "%.6f\t%.6f\t%.6f\t%.6f", r.mae, r.mse, r.rmse, r.r2);
        out << name << '\t' << span.start.to_string() << ' ' << span.end.to_string() << '\t'
            << buf << '\n';
    };
    row("stock", splits.train, base_rep);
    row("stock+topics", best_segment_range(dir.path(kScores)), topic_rep);
    log << "evaluate: baseline MSE " << base_rep.mse << ", topic-regressor MSE " << topic_rep.mse
        << "\n";

    std::ofstream bev(dir.path(kBreakpointEval));
    bev << "precision\trecall\tf_score\ttrue_positives\tdegenerate\n";
    if (!c.reference_events_path.empty() && dir.has(kBreakpoints)) {
        auto [topic, bp] = load_breakpoints(dir.path(kBreakpoints));
        auto reference = load_reference_events(c.reference_events_path);
        auto eval = evaluate_breakpoints(bp.dates, reference, c.breakpoint_tolerance_days);
        bev.precision(6);
        bev << eval.precision << '\t' << eval.recall << '\t' << eval.f_score << '\t'
            << eval.true_positives << '\t' << (eval.degenerate ? 1 : 0) << '\n';
        log << "evaluate: breakpoint P=" << eval.precision << " R=" << eval.recall
            << " F=" << eval.f_score << "\n";
    }
}

void do_ablate(const RunConfig& c, const RunDir& dir, std::ostream& log) {
    require_artifact(dir, kScores, "select");
    require_artifact(dir, kTopicSeries, "series");
    require_artifact(dir, kStock, "ingest");
    require_artifact(dir, kSplits, "ingest");
    auto series = load_topic_series(dir.path(kTopicSeries));
    auto stock = load_stock_artifact(dir.path(kStock));
    auto splits = load_splits(dir.path(kSplits));
    DateRange best = best_segment_range(dir.path(kScores));

    std::vector<Date> train_dates, test_dates;
    std::vector<double> train_pct, test_pct;
    stock_window(stock, best, train_dates, train_pct);
    stock_window(stock, splits.test, test_dates, test_pct);
    auto regressors = aligned_topics(series, train_dates, c);

    std::map<std::string, std::vector<double>> future;
    if (c.observed_regressors) {
        for (const auto& t : aligned_topics(series, test_dates, c)) future[t.topic] = t.counts;
    } else {
        std::vector<TopicSeries> hist;
        for (const auto& s : series) hist.push_back(slice_series(s, splits.train));
        auto tf = forecast_topic_trends(hist, test_dates, c.forecast);
        for (std::size_t i = 0; i < series.size(); ++i) future[series[i].topic] = tf.forecasts[i].yhat;
    }

    auto results = ablate_topics(train_dates, train_pct, regressors, c.forecast, test_dates,
                                 test_pct, future);
    std::ofstream out(dir.path(kAblation));
    out << "topic\tMAE\tMSE\tRMSE\tR2\tmse_percent_change\n";
    out.precision(6);
    std::vector<std::pair<std::string, double>> bars;
    for (const auto& r : results) {
        out << r.topic << '\t' << r.report.mae << '\t' << r.report.mse << '\t' << r.report.rmse
            << '\t' << r.report.r2 << '\t' << r.mse_percent_change << '\n';
        bars.emplace_back(r.topic, r.mse_percent_change);
    }
    emit_bars(bars, dir.path(kAblationPlot), "MSE percent change per withheld topic");
    log << "ablate: " << results.size() << " topics\n";
}

}  // namespace

const std::vector<Stage>& all_stages() {
    static const std::vector<Stage> stages = [] {
        std::vector<Stage> s;
        for (auto& [stage, name] : kStageNames) s.push_back(stage);
        return s;
    }();
    return stages;
}

std::string stage_name(Stage s) {
    for (auto& [stage, name] : kStageNames)
        if (stage == s) return name;
    return "?";
}

Stage parse_stage(const std::string& name) {
    for (auto& [stage, n] : kStageNames)
        if (name == n) return stage;
    throw std::invalid_argument("unknown stage '" + name + "'");
}

bool run_stage(Stage stage, const RunConfig& config, bool force, std::ostream& log) {
    RunDir dir(config);
    StageIo io = stage_io(stage, config, dir);
    const std::string manifest_path = (dir.root / "manifest" / (stage_name(stage) + ".json")).string();

    json inputs = json::object();
    bool inputs_ready = true;
    for (const auto& path : io.inputs) {
        if (!fs::exists(path)) {
            inputs_ready = false;
            break;
        }
        inputs[path] = file_hash(path);
    }

    if (!force && inputs_ready && fs::exists(manifest_path)) {
        std::ifstream in(manifest_path);
        json prev = json::parse(in, nullptr, false);
        bool outputs_exist = true;
        for (auto* name : io.outputs)
            if (!dir.has(name)) outputs_exist = false;
        if (!prev.is_discarded() && outputs_exist &&
            prev.value("config_hash", "") == config.config_hash() &&
            prev.value("inputs", json::object()) == inputs) {
            log << stage_name(stage) << ": up-to-date\n";
            return false;
        }
    }

    switch (stage) {
        case Stage::Ingest: do_ingest(config, dir, log); break;
        case Stage::Reduce: do_reduce(config, dir, log); break;
        case Stage::Cluster: do_cluster(config, dir, log); break;
        case Stage::Label: do_label(config, dir, log); break;
        case Stage::Series: do_series(config, dir, log); break;
        case Stage::Breakpoints: do_breakpoints(config, dir, log); break;
        case Stage::SegmentStage: do_segment(config, dir, log); break;
        case Stage::Select: do_select(config, dir, log); break;
        case Stage::Forecast: do_forecast(config, dir, log); break;
        case Stage::Evaluate: do_evaluate(config, dir, log); break;
        case Stage::Ablate: do_ablate(config, dir, log); break;
    }

    // re-hash inputs (stages consume run-dir artifacts that existed already)
    inputs = json::object();
    for (const auto& path : io.inputs) inputs[path] = file_hash(path);
    json manifest = {{"stage", stage_name(stage)},
                     {"version", kVersion},
                     {"config_hash", config.config_hash()},
                     {"inputs", inputs},
                     {"outputs", json::array()}};
    for (auto* name : io.outputs) manifest["outputs"].push_back(name);
    std::ofstream out(manifest_path);
    out << manifest.dump(2) << "\n";
    return true;
}

void run_pipeline(const RunConfig& config, bool force, std::ostream& log) {
    for (Stage s : all_stages()) run_stage(s, config, force, log);
}

}  // namespace regimecast
