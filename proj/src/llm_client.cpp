#include "regimecast/llm_client.hpp"

#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <httplib.h>
#include <json.hpp>

namespace regimecast {

namespace {

std::string trim(const std::string& s) {
    auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

std::string first_line(const std::string& s) {
    auto pos = s.find('\n');
    return trim(pos == std::string::npos ? s : s.substr(0, pos));
}

}  // namespace

std::string fnv1a_hex(const std::string& bytes) {
    std::uint64_t h = 14695981039346656037ull;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 1099511628211ull;
    }
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

const std::string& default_label_prompt_template() {
    static const std::string tmpl =
        "You are given the most frequent keywords of one cluster of news-article "
        "keywords. Reply with a single short topic label that best represents the "
        "cluster. Reply with the label only, no punctuation around it.\n"
        "Keywords: {keywords}\n";
    return tmpl;
}

std::string render_label_prompt(const std::string& template_text,
                                const std::vector<std::string>& top_keywords) {
    std::string joined;
    for (std::size_t i = 0; i < top_keywords.size(); ++i) {
        if (i) joined += ", ";
        joined += top_keywords[i];
    }
    std::string out = template_text;
    auto pos = out.find("{keywords}");
    if (pos == std::string::npos) throw std::runtime_error("prompt template lacks {keywords}");
    out.replace(pos, std::string("{keywords}").size(), joined);
    return out;
}

std::string label_cluster_llm(const std::vector<std::string>& top_keywords,
                              const LlmConfig& config) {
    if (top_keywords.empty()) throw std::invalid_argument("cannot label an empty keyword list");
    if (config.base_url.empty()) throw std::invalid_argument("labeling endpoint not configured");

    std::string tmpl = default_label_prompt_template();
    if (!config.prompt_template_path.empty()) {
        std::ifstream in(config.prompt_template_path);
        if (!in) throw std::runtime_error("cannot open prompt template: " + config.prompt_template_path);
        std::ostringstream ss;
        ss << in.rdbuf();
        tmpl = ss.str();
    }
    const std::string prompt = render_label_prompt(tmpl, top_keywords);
    const std::string cache_key = fnv1a_hex(config.model + "\x1f" + prompt);

    std::filesystem::path cache_file;
    if (!config.cache_dir.empty()) {
        cache_file = std::filesystem::path(config.cache_dir) / (cache_key + ".txt");
        std::ifstream cached(cache_file);
        if (cached) {
            std::ostringstream ss;
            ss << cached.rdbuf();
            return first_line(ss.str());
        }
    }

    nlohmann::json body = {
        {"model", config.model},
        {"messages", nlohmann::json::array({{{"role", "user"}, {"content", prompt}}})},
        {"temperature", 0},
    };
    httplib::Headers headers;
    if (const char* key = std::getenv(config.api_key_env.c_str()); key && *key)
        headers.emplace("Authorization", std::string("Bearer ") + key);

    httplib::Client client(config.base_url);
    client.set_connection_timeout(30);
    client.set_read_timeout(120);

    std::string label;
    std::string last_error = "empty model response";
    for (int attempt = 0; attempt <= config.max_retries; ++attempt) {
        auto res = client.Post("/v1/chat/completions", headers, body.dump(), "application/json");
        if (!res) {
            last_error = "transport failure: " + httplib::to_string(res.error());
            continue;
        }
        if (res->status != 200) {
            last_error = "labeling endpoint returned status " + std::to_string(res->status);
            continue;
        }
        try {
            auto doc = nlohmann::json::parse(res->body);
            label = first_line(doc.at("choices").at(0).at("message").at("content").get<std::string>());
        } catch (const nlohmann::json::exception& e) {
            last_error = std::string("malformed completion payload: ") + e.what();
            continue;
        }
        if (!label.empty()) break;
    }
    if (label.empty()) throw std::runtime_error("labeling failed: " + last_error);

    if (!cache_file.empty()) {
        std::filesystem::create_directories(cache_file.parent_path());
        std::ofstream out(cache_file);
        out << label << '\n';
    }
    return label;
}

}  // namespace regimecast
