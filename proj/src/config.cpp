#include "regimecast/config.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace regimecast {

namespace {

using nlohmann::json;

template <typename T>
void get_if(const json& j, const char* key, T& out) {
    if (j.contains(key)) out = j.at(key).get<T>();
}

std::string enum_name(ReducerKind k) { return k == ReducerKind::Pca ? "pca" : "external"; }
std::string enum_name(LabelerKind k) { return k == LabelerKind::Stub ? "stub" : "llm"; }
std::string enum_name(WeekendPolicy k) { return k == WeekendPolicy::Roll ? "roll" : "drop"; }
std::string enum_name(TopicCountMode k) {
    return k == TopicCountMode::Articles ? "articles" : "keywords";
}
std::string enum_name(SegmentationMode k) {
    return k == SegmentationMode::Midpoint ? "midpoint" : "direct";
}
std::string enum_name(ScoreDirection k) {
    return k == ScoreDirection::Paper ? "paper" : "similarity";
}
std::string enum_name(NdMode k) { return k == NdMode::Paper ? "paper" : "path-length"; }

template <typename E>
E parse_enum(const std::string& s, std::initializer_list<std::pair<const char*, E>> table,
             const char* what) {
    for (auto& [name, value] : table)
        if (s == name) return value;
    throw std::invalid_argument(std::string("invalid ") + what + ": '" + s + "'");
}

}  // namespace

RunConfig RunConfig::from_json_text(const std::string& text) {
    json j = json::parse(text);
    RunConfig c;
    if (j.contains("paths")) {
        const auto& p = j["paths"];
        get_if(p, "corpus", c.corpus_path);
        get_if(p, "vectors", c.vectors_path);
        get_if(p, "reduced_vectors", c.reduced_vectors_path);
        get_if(p, "stock", c.stock_path);
        get_if(p, "stock_source", c.stock_source);
        get_if(p, "reference_events", c.reference_events_path);
        get_if(p, "output_dir", c.output_dir);
    }
    get_if(j, "stock_symbol", c.stock_symbol);
    get_if(j, "section_whitelist", c.section_whitelist);
    if (j.contains("reducer"))
        c.reducer = parse_enum<ReducerKind>(j["reducer"],
                                            {{"pca", ReducerKind::Pca},
                                             {"external", ReducerKind::External}},
                                            "reducer");
    get_if(j, "n_components", c.n_components);
    if (j.contains("hdbscan")) {
        get_if(j["hdbscan"], "min_cluster_size", c.hdbscan.min_cluster_size);
        get_if(j["hdbscan"], "min_samples", c.hdbscan.min_samples);
    }
    get_if(j, "top_keywords", c.top_keywords);
    if (j.contains("labeler"))
        c.labeler = parse_enum<LabelerKind>(
            j["labeler"], {{"stub", LabelerKind::Stub}, {"llm", LabelerKind::Llm}}, "labeler");
    if (j.contains("llm")) {
        const auto& l = j["llm"];
        get_if(l, "base_url", c.llm.base_url);
        get_if(l, "model", c.llm.model);
        get_if(l, "api_key_env", c.llm.api_key_env);
        get_if(l, "prompt_template", c.llm.prompt_template_path);
        get_if(l, "cache_dir", c.llm.cache_dir);
    }
    if (j.contains("count_mode"))
        c.count_mode = parse_enum<TopicCountMode>(j["count_mode"],
                                                  {{"articles", TopicCountMode::Articles},
                                                   {"keywords", TopicCountMode::Keywords}},
                                                  "count_mode");
    if (j.contains("weekend_policy"))
        c.weekend_policy = parse_enum<WeekendPolicy>(
            j["weekend_policy"], {{"roll", WeekendPolicy::Roll}, {"drop", WeekendPolicy::Drop}},
            "weekend_policy");
    get_if(j, "smoothing_window", c.smoothing_window);
    if (j.contains("pelt")) {
        const auto& p = j["pelt"];
        get_if(p, "penalty", c.pelt.penalty);
        get_if(p, "min_segment_length", c.pelt.min_segment_length);
        get_if(p, "kernel_bandwidth", c.pelt.kernel_bandwidth);
    }
    get_if(j, "breakpoint_tolerance_days", c.breakpoint_tolerance_days);
    get_if(j, "breakpoint_topic", c.breakpoint_topic);
    if (j.contains("segmentation_mode"))
        c.segmentation_mode = parse_enum<SegmentationMode>(
            j["segmentation_mode"],
            {{"midpoint", SegmentationMode::Midpoint}, {"direct", SegmentationMode::Direct}},
            "segmentation_mode");
    get_if(j, "min_segment_span_days", c.min_segment_span_days);
    if (j.contains("score_direction"))
        c.score_direction = parse_enum<ScoreDirection>(
            j["score_direction"],
            {{"paper", ScoreDirection::Paper}, {"similarity", ScoreDirection::Similarity}},
            "score_direction");
    if (j.contains("nd_mode"))
        c.nd_mode = parse_enum<NdMode>(
            j["nd_mode"], {{"paper", NdMode::Paper}, {"path-length", NdMode::PathLength}},
            "nd_mode");
    if (j.contains("forecast")) {
        const auto& f = j["forecast"];
        get_if(f, "n_changepoints", c.forecast.n_changepoints);
        get_if(f, "yearly_order", c.forecast.yearly_order);
        get_if(f, "weekly_order", c.forecast.weekly_order);
        get_if(f, "ridge_lambda", c.forecast.ridge_lambda);
        get_if(f, "auto_seasonality", c.forecast.auto_seasonality);
    }
    get_if(j, "observed_regressors", c.observed_regressors);
    if (j.contains("split_proportions")) {
        const auto& s = j["split_proportions"];
        SplitProportions p;
        get_if(s, "train", p.train);
        get_if(s, "train_val", p.train_val);
        get_if(s, "test", p.test);
        get_if(s, "test_val", p.test_val);
        c.split_proportions = p;
    }
    get_if(j, "seed", c.seed);
    return c;
}

RunConfig RunConfig::from_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open config: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return from_json_text(ss.str());
}

std::string RunConfig::to_json_text() const {
    json j;
    j["paths"] = {{"corpus", corpus_path},
                  {"vectors", vectors_path},
                  {"reduced_vectors", reduced_vectors_path},
                  {"stock", stock_path},
                  {"stock_source", stock_source},
                  {"reference_events", reference_events_path},
                  {"output_dir", output_dir}};
    j["stock_symbol"] = stock_symbol;
    j["section_whitelist"] = section_whitelist;
    j["reducer"] = enum_name(reducer);
    j["n_components"] = n_components;
    j["hdbscan"] = {{"min_cluster_size", hdbscan.min_cluster_size},
                    {"min_samples", hdbscan.min_samples}};
    j["top_keywords"] = top_keywords;
    j["labeler"] = enum_name(labeler);
    j["llm"] = {{"base_url", llm.base_url},
                {"model", llm.model},
                {"api_key_env", llm.api_key_env},
                {"prompt_template", llm.prompt_template_path},
                {"cache_dir", llm.cache_dir}};
    j["count_mode"] = enum_name(count_mode);
    j["weekend_policy"] = enum_name(weekend_policy);
    j["smoothing_window"] = smoothing_window;
    j["pelt"] = {{"penalty", pelt.penalty},
                 {"min_segment_length", pelt.min_segment_length},
                 {"kernel_bandwidth", pelt.kernel_bandwidth}};
    j["breakpoint_tolerance_days"] = breakpoint_tolerance_days;
    j["breakpoint_topic"] = breakpoint_topic;
    j["segmentation_mode"] = enum_name(segmentation_mode);
    j["min_segment_span_days"] = min_segment_span_days;
    j["score_direction"] = enum_name(score_direction);
    j["nd_mode"] = enum_name(nd_mode);
    j["forecast"] = {{"n_changepoints", forecast.n_changepoints},
                     {"yearly_order", forecast.yearly_order},
                     {"weekly_order", forecast.weekly_order},
                     {"ridge_lambda", forecast.ridge_lambda},
                     {"auto_seasonality", forecast.auto_seasonality}};
    j["observed_regressors"] = observed_regressors;
    if (split_proportions)
        j["split_proportions"] = {{"train", split_proportions->train},
                                  {"train_val", split_proportions->train_val},
                                  {"test", split_proportions->test},
                                  {"test_val", split_proportions->test_val}};
    j["seed"] = seed;
    return j.dump(2) + "\n";
}

std::string RunConfig::config_hash() const { return fnv1a_hex(to_json_text()); }

void RunConfig::validate() const {
    auto require_file = [](const std::string& path, const char* what) {
        if (!path.empty() && !std::filesystem::exists(path))
            throw std::runtime_error(std::string(what) + " does not exist: " + path);
    };
    require_file(corpus_path, "corpus");
    require_file(vectors_path, "vectors file");
    require_file(reduced_vectors_path, "reduced vectors file");
    require_file(stock_path, "stock file");
    require_file(reference_events_path, "reference events file");
    if (n_components < 1) throw std::invalid_argument("n_components must be >= 1");
    if (hdbscan.min_cluster_size < 1 || hdbscan.min_samples < 1)
        throw std::invalid_argument("hdbscan parameters must be >= 1");
    if (pelt.min_segment_length < 1)
        throw std::invalid_argument("pelt.min_segment_length must be >= 1");
    if (breakpoint_tolerance_days < 0)
        throw std::invalid_argument("breakpoint_tolerance_days must be >= 0");
    if (min_segment_span_days < 1)
        throw std::invalid_argument("min_segment_span_days must be >= 1");
    if (smoothing_window < 1) throw std::invalid_argument("smoothing_window must be >= 1");
}

}  // namespace regimecast
