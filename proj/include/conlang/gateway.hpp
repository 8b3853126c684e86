#pragma once

#include <deque>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "conlang/fields.hpp"

namespace conlang {

struct DecodingParams {
    std::optional<double> temperature;       // unset -> provider default
    std::optional<double> top_p;             // unset -> provider default
    std::optional<int> max_output_tokens;    // unset -> provider maximum
};

struct GatewayError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct TemplateError : GatewayError {
    using GatewayError::GatewayError;
};
struct ProviderError : GatewayError {
    using GatewayError::GatewayError;
};
struct FixtureMiss : GatewayError {
    std::string digest;
    explicit FixtureMiss(std::string d)
        : GatewayError("no fixture for request digest " + d), digest(std::move(d)) {}
};
struct StructuredOutputFailure : GatewayError {
    std::vector<std::string> attempt_errors;
    explicit StructuredOutputFailure(std::vector<std::string> errors)
        : GatewayError("structured output failed after " +
                       std::to_string(errors.size()) + " attempt(s): " +
                       (errors.empty() ? "" : errors.back())),
          attempt_errors(std::move(errors)) {}
};

struct PromptRequest {
    std::string template_id;
    std::map<std::string, std::string> slots;
    std::string model_id;
    DecodingParams decoding;
};

/// A request after template rendering; what backends actually see.
struct RenderedRequest {
    std::string template_id;
    std::map<std::string, std::string> slots;
    std::string model_id;
    DecodingParams decoding;
    std::string text;
};

/// Stable fixture key: sha256 over a canonical serialization of
/// (template_id, sorted slots, model_id, resolved decoding params).
std::string request_digest(const RenderedRequest& req);

class Backend {
  public:
    virtual ~Backend() = default;
    virtual std::string complete(const RenderedRequest& request) = 0;
    /// True for backends that touch the network (replay-purity assertions).
    virtual bool uses_network() const { return false; }
};

/// Test backend in the usual fake-client style: either a FIFO of canned
/// responses or a response function, plus a log of every request seen.
class ScriptedBackend : public Backend {
  public:
    ScriptedBackend() = default;
    explicit ScriptedBackend(std::function<std::string(const RenderedRequest&)> fn)
        : responder_(std::move(fn)) {}

    void push_response(std::string response) { queue_.push_back(std::move(response)); }
    const std::vector<RenderedRequest>& requests() const { return requests_; }
    size_t call_count() const { return requests_.size(); }

    std::string complete(const RenderedRequest& request) override;

  private:
    std::function<std::string(const RenderedRequest&)> responder_;
    std::deque<std::string> queue_;
    std::vector<RenderedRequest> requests_;
};

/// OpenAI-compatible chat-completions backend. Reads the API key from the
/// environment (CONLANG_API_KEY, falling back to OPENAI_API_KEY); the key is
/// never logged or written to fixtures.
class HttpBackend : public Backend {
  public:
    explicit HttpBackend(std::string api_base = "");
    std::string complete(const RenderedRequest& request) override;
    bool uses_network() const override { return true; }

  private:
    std::string api_base_;
};

/// Template library: plain-text files with {{SLOT}} placeholders, one file per
/// pipeline step, loaded from a prompts directory.
class PromptLibrary {
  public:
    PromptLibrary() = default;
    explicit PromptLibrary(const std::string& prompts_dir);
    void add_template(const std::string& id, std::string text);
    /// Renders template `id`; throws TemplateError on an unbound slot.
    std::string render_template(const std::string& id,
                                const std::map<std::string, std::string>& slots) const;

  private:
    std::map<std::string, std::string> templates_;
};

enum class GatewayMode { live, record, replay };

GatewayMode gateway_mode_from_string(const std::string& name);

struct GatewayConfig {
    GatewayMode mode = GatewayMode::live;
    std::string fixtures_path;        // required for record/replay
    std::string default_model_id;
    int transport_retries = 3;
    int structured_retries = 3;
};

/// Provider-agnostic model access with templating, structured extraction,
/// retries, and record/replay fixtures.
class Gateway {
  public:
    Gateway(GatewayConfig config, std::shared_ptr<Backend> backend,
            PromptLibrary prompts);

    std::string complete(const PromptRequest& request);

    using Validator = std::function<void(const StructuredResponse&)>;
    StructuredResponse complete_structured(const PromptRequest& request,
                                           const FieldSchema& schema,
                                           int max_retries = -1,
                                           const Validator& validate = nullptr);

    const GatewayConfig& config() const { return config_; }
    const PromptLibrary& prompts() const { return prompts_; }
    std::string resolve_model(const std::string& model_id) const {
        return model_id.empty() ? config_.default_model_id : model_id;
    }

  private:
    std::string complete_rendered(const RenderedRequest& request);

    GatewayConfig config_;
    std::shared_ptr<Backend> backend_;
    PromptLibrary prompts_;
    std::map<std::string, std::string> cache_;  // digest -> response
    std::mutex mutex_;
};

}  // namespace conlang
