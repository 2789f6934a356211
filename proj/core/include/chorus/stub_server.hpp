#pragma once

#include "chorus/types.hpp"

#include <cstddef>
#include <memory>
#include <string>
#include <vector>

namespace chorus {

/// In-process deliberation platform speaking the HttpRemotePlatform wire
/// format. Backs adapter-conformance tests and local integration runs.
class StubPlatformServer {
public:
    /// `required_bearer` non-empty enforces Authorization: Bearer <token>.
    explicit StubPlatformServer(std::string required_bearer = "");
    ~StubPlatformServer();

    StubPlatformServer(const StubPlatformServer&) = delete;
    StubPlatformServer& operator=(const StubPlatformServer&) = delete;

    /// Binds 127.0.0.1 on an ephemeral port (or `port` if > 0) and serves on
    /// a background thread. Returns the bound port.
    int start(int port = 0);
    void stop();

    int port() const noexcept;
    std::string base_url() const;

    std::size_t post_count() const;
    std::size_t vote_count() const;

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

/// Canned chat-completion endpoint replaying recorded fixtures. A request is
/// answered by the first fixture whose `match` occurs in the final user
/// message (empty `match` matches anything); `once` fixtures are consumed in
/// order, which models scripted multi-turn exchanges.
class StubChatServer {
public:
    struct Fixture {
        std::string match;
        std::string content;   // returned as choices[0].message.content
        bool once = false;
    };

    StubChatServer();
    explicit StubChatServer(std::vector<Fixture> fixtures);
    ~StubChatServer();

    StubChatServer(const StubChatServer&) = delete;
    StubChatServer& operator=(const StubChatServer&) = delete;

    /// Loads {"fixtures": [{"match": ..., "content": ..., "once": bool}...]}.
    static std::vector<Fixture> fixtures_from_file(const std::string& path);

    void add_fixture(Fixture fixture);
    /// Artificial per-request delay, for timeout tests.
    void set_response_delay_ms(int ms);

    int start(int port = 0);
    void stop();

    int port() const noexcept;
    std::string base_url() const;

    std::size_t request_count() const;
    /// Final user message of the i-th received request.
    std::string request_user_message(std::size_t index) const;

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

} // namespace chorus
