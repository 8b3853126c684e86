#include "conlang/gateway.hpp"

#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <thread>

#include "conlang/util.hpp"
#include "json.hpp"

namespace conlang {

namespace {

std::string decoding_token(const DecodingParams& d) {
    auto real = [](const std::optional<double>& v) {
        if (!v) return std::string("default");
        char buf[32];
        std::snprintf(buf, sizeof(buf), "%.17g", *v);
        return std::string(buf);
    };
    std::string max = d.max_output_tokens
                          ? std::to_string(*d.max_output_tokens)
                          : std::string("max");
    return real(d.temperature) + "\x1f" + real(d.top_p) + "\x1f" + max;
}

}  // namespace

std::string request_digest(const RenderedRequest& req) {
    std::string canon;
    canon += req.template_id;
    canon += '\x1e';
    canon += req.model_id;
    canon += '\x1e';
    canon += decoding_token(req.decoding);
    canon += '\x1e';
    for (const auto& [k, v] : req.slots) {  // std::map iterates sorted
        canon += k;
        canon += '\x1f';
        canon += std::to_string(v.size());
        canon += '\x1f';
        canon += v;
        canon += '\x1e';
    }
    return sha256_hex(canon);
}

std::string ScriptedBackend::complete(const RenderedRequest& request) {
    requests_.push_back(request);
    if (!queue_.empty()) {
        std::string r = std::move(queue_.front());
        queue_.pop_front();
        return r;
    }
    if (responder_) return responder_(request);
    throw ProviderError("ScriptedBackend has no response queued");
}

HttpBackend::HttpBackend(std::string api_base) : api_base_(std::move(api_base)) {
    if (api_base_.empty()) {
        const char* env = std::getenv("CONLANG_API_BASE");
        api_base_ = env ? env : "https://api.openai.com";
    }
}

PromptLibrary::PromptLibrary(const std::string& prompts_dir) {
    namespace fs = std::filesystem;
    if (!fs::is_directory(prompts_dir))
        throw TemplateError("prompts directory not found: " + prompts_dir);
    for (const auto& entry : fs::directory_iterator(prompts_dir)) {
        if (!entry.is_regular_file() || entry.path().extension() != ".txt") continue;
        add_template(entry.path().stem().string(), read_file(entry.path().string()));
    }
}

void PromptLibrary::add_template(const std::string& id, std::string text) {
    templates_[id] = std::move(text);
}

std::string PromptLibrary::render_template(
    const std::string& id, const std::map<std::string, std::string>& slots) const {
    auto it = templates_.find(id);
    if (it == templates_.end()) throw TemplateError("unknown template: " + id);
    const std::string& tpl = it->second;
    std::string out;
    out.reserve(tpl.size());
    size_t pos = 0;
    while (pos < tpl.size()) {
        size_t open = tpl.find("{{", pos);
        if (open == std::string::npos) {
            out.append(tpl, pos, std::string::npos);
            break;
        }
        out.append(tpl, pos, open - pos);
        size_t close = tpl.find("}}", open + 2);
        if (close == std::string::npos)
            throw TemplateError("unterminated {{ in template " + id);
        std::string slot = tpl.substr(open + 2, close - open - 2);
        auto sit = slots.find(slot);
        if (sit == slots.end())
            throw TemplateError("unbound slot {{" + slot + "}} in template " + id);
        out += sit->second;
        pos = close + 2;
    }
    return out;
}

GatewayMode gateway_mode_from_string(const std::string& name) {
    if (name == "live") return GatewayMode::live;
    if (name == "record") return GatewayMode::record;
    if (name == "replay") return GatewayMode::replay;
    throw GatewayError("unknown gateway mode: " + name);
}

Gateway::Gateway(GatewayConfig config, std::shared_ptr<Backend> backend,
                 PromptLibrary prompts)
    : config_(std::move(config)),
      backend_(std::move(backend)),
      prompts_(std::move(prompts)) {
    if (config_.mode != GatewayMode::live) {
        if (config_.fixtures_path.empty())
            throw GatewayError("record/replay mode requires a fixtures path");
        std::ifstream in(config_.fixtures_path);
        if (config_.mode == GatewayMode::replay && !in)
            throw GatewayError("fixtures file not found: " + config_.fixtures_path);
        std::string line;
        while (std::getline(in, line)) {
            if (trim(line).empty()) continue;
            nlohmann::json j = nlohmann::json::parse(line);
            cache_[j.at("digest").get<std::string>()] =
                j.at("response").get<std::string>();
        }
    }
}

std::string Gateway::complete(const PromptRequest& request) {
    RenderedRequest rendered;
    rendered.template_id = request.template_id;
    rendered.slots = request.slots;
    rendered.model_id = resolve_model(request.model_id);
    rendered.decoding = request.decoding;
    rendered.text = prompts_.render_template(request.template_id, request.slots);
    return complete_rendered(rendered);
}

std::string Gateway::complete_rendered(const RenderedRequest& request) {
    const std::string digest = request_digest(request);
    if (config_.mode != GatewayMode::live) {
        std::lock_guard<std::mutex> lock(mutex_);
        auto it = cache_.find(digest);
        if (it != cache_.end()) return it->second;
        if (config_.mode == GatewayMode::replay) throw FixtureMiss(digest);
    }

    std::string response;
    std::string last_error;
    bool ok = false;
    for (int attempt = 0; attempt <= config_.transport_retries; ++attempt) {
        if (attempt > 0)
            std::this_thread::sleep_for(std::chrono::milliseconds(100 << (attempt - 1)));
        try {
            response = backend_->complete(request);
            ok = true;
            break;
        } catch (const ProviderError& e) {
            last_error = e.what();
        }
    }
    if (!ok) throw ProviderError("transport failed after retries: " + last_error);

    if (config_.mode == GatewayMode::record) {
        std::lock_guard<std::mutex> lock(mutex_);
        cache_[digest] = response;
        nlohmann::json rec = {{"digest", digest}, {"response", response}};
        std::ofstream out(config_.fixtures_path, std::ios::app);
        if (!out)
            throw GatewayError("cannot append to fixtures: " + config_.fixtures_path);
        out << rec.dump() << "\n";
    }
    return response;
}

StructuredResponse Gateway::complete_structured(const PromptRequest& request,
                                                const FieldSchema& schema,
                                                int max_retries,
                                                const Validator& validate) {
    if (max_retries < 0) max_retries = config_.structured_retries;
    std::vector<std::string> errors;
    PromptRequest attempt_req = request;
    for (int attempt = 0; attempt <= max_retries; ++attempt) {
        if (attempt > 0) {
            attempt_req = request;
            attempt_req.slots["__RETRY_ATTEMPT__"] = std::to_string(attempt);
            attempt_req.slots["__RETRY_ERROR__"] = errors.back();
        }
        RenderedRequest rendered;
        rendered.template_id = attempt_req.template_id;
        rendered.slots = attempt_req.slots;
        rendered.model_id = resolve_model(attempt_req.model_id);
        rendered.decoding = attempt_req.decoding;
        rendered.text = prompts_.render_template(request.template_id, request.slots);
        if (attempt > 0) {
            rendered.text += "\n\nYour previous reply could not be used: " +
                             errors.back() + "\n" + field_format_help() +
                             "\nReply again with the corrected output.";
        }
        try {
            std::string raw = complete_rendered(rendered);
            StructuredResponse resp = extract_fields(raw, schema);
            if (validate) validate(resp);
            return resp;
        } catch (const FieldError& e) {
            errors.push_back(e.what());
        }
    }
    throw StructuredOutputFailure(std::move(errors));
}

}  // namespace conlang
