#include "shortprompt/core/codec.hpp"
#include "shortprompt/imaging/backend.hpp"
#include "shortprompt/imaging/png.hpp"

#include <httplib.h>
#include <nlohmann/json.hpp>

#include <cstdlib>

namespace shortprompt::imaging {

using nlohmann::json;

RemoteBackend::RemoteBackend(RemoteOptions options) : options_(std::move(options))
{
    if (const char* key = std::getenv(options_.api_key_env.c_str())) {
        api_key_ = key;
    }
}

std::string RemoteBackend::cache_identity(const GenerationRequest&) const
{
    return provider_id() + "/" + options_.size;
}

std::string RemoteBackend::request_body(const std::string& prompt) const
{
    return json{{"model", options_.model}, {"prompt", prompt}, {"size", options_.size}, {"n", 1}}
        .dump();
}

namespace {

httplib::Headers auth_headers(const std::string& key)
{
    httplib::Headers headers;
    if (!key.empty()) {
        headers.emplace("Authorization", "Bearer " + key);
    }
    return headers;
}

void apply_timeouts(httplib::Client& client, std::chrono::milliseconds timeout)
{
    const auto secs = timeout.count() / 1000;
    const auto usecs = (timeout.count() % 1000) * 1000;
    client.set_connection_timeout(secs, usecs);
    client.set_read_timeout(secs, usecs);
    client.set_write_timeout(secs, usecs);
}

}  // namespace

BackendResult RemoteBackend::render(const GenerationRequest& request,
                                    std::chrono::milliseconds timeout)
{
    httplib::Client client(options_.base_url);
    apply_timeouts(client, timeout);
    auto res = client.Post(options_.path, auth_headers(api_key_), request_body(request.prompt),
                           "application/json");
    if (!res) {
        const auto err = res.error();
        const bool timed_out =
            err == httplib::Error::ConnectionTimeout || err == httplib::Error::Read;
        return {{}, timed_out ? FailureReason::timeout : FailureReason::provider_error,
                httplib::to_string(err)};
    }
    if (res->status < 200 || res->status >= 300) {
        return {{}, FailureReason::provider_error, "HTTP " + std::to_string(res->status)};
    }
    auto body = json::parse(res->body, nullptr, false);
    if (!body.is_object() || !body.contains("data") || !body["data"].is_array() ||
        body["data"].empty() || !body["data"][0].contains("b64_json") ||
        !body["data"][0]["b64_json"].is_string()) {
        return {{}, FailureReason::provider_error, "unexpected response shape"};
    }
    try {
        auto png = codec::base64_decode(body["data"][0]["b64_json"].get<std::string>());
        if (!has_png_signature(png)) {
            return {{}, FailureReason::provider_error, "payload is not a PNG"};
        }
        return {std::move(png), FailureReason::none, {}};
    } catch (const std::exception& e) {
        return {{}, FailureReason::provider_error, e.what()};
    }
}

bool RemoteBackend::healthy()
{
    httplib::Client client(options_.base_url);
    apply_timeouts(client, std::chrono::seconds(3));
    auto res = client.Get(options_.health_path, auth_headers(api_key_));
    return res && res->status >= 200 && res->status < 300;
}

}  // namespace shortprompt::imaging
