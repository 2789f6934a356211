// Standalone stub deliberation platform speaking the http_remote wire
// format. Useful for exercising the CLI against a live endpoint without a
// real deployment.

#include <CLI11.hpp>

#include "chorus/stub_server.hpp"

#include <chrono>
#include <iostream>
#include <thread>

int main(int argc, char** argv) {
    CLI::App app{"chorus-stub-platform - local deliberation platform stub"};
    int port = 8787;
    std::string bearer;
    app.add_option("--port", port, "Port to listen on (default 8787)");
    app.add_option("--bearer", bearer, "Require this bearer token");
    CLI11_PARSE(app, argc, argv);

    chorus::StubPlatformServer server(bearer);
    try {
        server.start(port);
    } catch (const std::exception& e) {
        std::cerr << "failed to start: " << e.what() << "\n";
        return 1;
    }
    std::cout << "stub platform listening on " << server.base_url() << "\n";
    for (;;) {
        std::this_thread::sleep_for(std::chrono::seconds(3600));
    }
}
