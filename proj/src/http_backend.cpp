#include <cstdlib>

#include "conlang/gateway.hpp"
#include "json.hpp"

#ifdef CONLANG_WITH_TLS
#define CPPHTTPLIB_OPENSSL_SUPPORT
#endif
#include "httplib.h"

namespace conlang {

std::string HttpBackend::complete(const RenderedRequest& request) {
    const char* key = std::getenv("CONLANG_API_KEY");
    if (key == nullptr) key = std::getenv("OPENAI_API_KEY");
    if (key == nullptr)
        throw ProviderError("no API key in CONLANG_API_KEY or OPENAI_API_KEY");

    nlohmann::json body;
    body["model"] = request.model_id;
    body["messages"] = nlohmann::json::array(
        {{{"role", "user"}, {"content", request.text}}});
    if (request.decoding.temperature) body["temperature"] = *request.decoding.temperature;
    if (request.decoding.top_p) body["top_p"] = *request.decoding.top_p;
    if (request.decoding.max_output_tokens)
        body["max_tokens"] = *request.decoding.max_output_tokens;

    httplib::Client client(api_base_);
    client.set_read_timeout(600, 0);
    client.set_bearer_token_auth(key);
    auto res = client.Post("/v1/chat/completions", body.dump(), "application/json");
    if (!res)
        throw ProviderError("transport error: " + httplib::to_string(res.error()));
    if (res->status != 200)
        throw ProviderError("provider returned HTTP " + std::to_string(res->status));
    try {
        nlohmann::json j = nlohmann::json::parse(res->body);
        return j.at("choices").at(0).at("message").at("content").get<std::string>();
    } catch (const nlohmann::json::exception& e) {
        throw ProviderError(std::string("unexpected provider response: ") + e.what());
    }
}

}  // namespace conlang
