#pragma once

#include <string>
#include <vector>

namespace regimecast {

struct LlmConfig {
    std::string base_url;           // e.g. http://localhost:8080
    std::string model = "gpt-4-0613";
    std::string api_key_env = "REGIMECAST_API_KEY";
    std::string prompt_template_path;  // defaults to the bundled template
    std::string cache_dir;             // "" disables the cache
    int max_retries = 1;
};

/// Renders the labeling prompt from the versioned template; "{keywords}" is
/// replaced with a comma-separated keyword list.
std::string render_label_prompt(const std::string& template_text,
                                const std::vector<std::string>& top_keywords);

const std::string& default_label_prompt_template();

/// Asks the chat-completion endpoint for a single-line topic label.
/// Responses are cached on disk keyed by (model, prompt hash) so reruns are
/// reproducible. Empty responses are retried, then raised.
std::string label_cluster_llm(const std::vector<std::string>& top_keywords,
                              const LlmConfig& config);

/// FNV-1a over bytes, hex-encoded; also used for run manifests.
std::string fnv1a_hex(const std::string& bytes);

}  // namespace regimecast
