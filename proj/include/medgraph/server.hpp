#pragma once

#include <memory>
#include <string>

#include "medgraph/monitor.hpp"

namespace medgraph {

// HTTP surface over an immutable post-run snapshot. Routes:
//
//   GET  /resource/{encoded-iri}      N-Triples of that subject (404 if none)
//   POST /query                       body: query text -> tab-separated rows
//   GET  /patients/{encoded-iri}/risk decimal text (404 for unknown patients)
//   GET  /alarms                      one alarm per line:
//                                     patient doctor risk threshold sequence
//
// Handlers only read shared state, so any number of requests may run
// concurrently. Swapping in a new snapshot means constructing a new server.
class MonitorServer {
public:
    MonitorServer(std::shared_ptr<const Dataset> snapshot, MonitorReport report, Vocabulary vocab);
    ~MonitorServer();

    MonitorServer(const MonitorServer&) = delete;
    MonitorServer& operator=(const MonitorServer&) = delete;

    // Blocking; returns false if the port cannot be bound.
    bool listen(const std::string& host, int port);

    // Test support: bind an ephemeral port, then serve from a thread.
    int bind_any_port(const std::string& host);
    bool listen_after_bind();
    void wait_until_ready() const;

    void stop();

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

}  // namespace medgraph
