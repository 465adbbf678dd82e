#include "medgraph/server.hpp"

#include <httplib.h>

#include "medgraph/decimal.hpp"
#include "medgraph/errors.hpp"
#include "medgraph/federation.hpp"
#include "medgraph/ntriples.hpp"

namespace medgraph {

struct MonitorServer::Impl {
    std::shared_ptr<const Dataset> snapshot;
    MonitorReport report;
    Vocabulary vocab;
    httplib::Server server;

    Impl(std::shared_ptr<const Dataset> snap, MonitorReport rep, Vocabulary voc)
        : snapshot(std::move(snap)), report(std::move(rep)), vocab(std::move(voc)) {
        setup_routes();
    }

    void setup_routes() {
        server.Get(R"(/resource/(.+))", [this](const httplib::Request& req, httplib::Response& res) {
            handle_resource(req.matches[1].str(), res);
        });
        server.Post("/query", [this](const httplib::Request& req, httplib::Response& res) {
            handle_query(req.body, res);
        });
        server.Get(R"(/patients/(.+)/risk)", [this](const httplib::Request& req, httplib::Response& res) {
            handle_risk(req.matches[1].str(), res);
        });
        server.Get("/alarms", [this](const httplib::Request&, httplib::Response& res) {
            handle_alarms(res);
        });
    }

    void handle_resource(const std::string& raw_iri, httplib::Response& res) {
        if (!Iri::valid(raw_iri)) {
            res.status = 400;
            res.set_content("malformed IRI\n", "text/plain");
            return;
        }
        // document = all triples with this subject, graph scoping dropped
        Dataset document;
        for (const Quad& q : snapshot->match(QuadPattern{Iri(raw_iri), {}, {}, {}})) {
            document.add(Quad(q.subject, q.predicate, q.object, GraphName()));
        }
        if (document.empty()) {
            res.status = 404;
            res.set_content("no triples about this resource\n", "text/plain");
            return;
        }
        res.set_content(serialize_canonical(document), "application/n-triples");
    }

    void handle_query(const std::string& body, httplib::Response& res) {
        try {
            SelectQuery query = parse_query(body);
            std::vector<Solution> solutions = evaluate_query(query, *snapshot);
            res.set_content(render_solutions_tsv(query, solutions), "text/tab-separated-values");
        } catch (const Error& e) {
            res.status = 400;
            res.set_content(std::string(e.what()) + "\n", "text/plain");
        }
    }

    void handle_risk(const std::string& raw_iri, httplib::Response& res) {
        if (!Iri::valid(raw_iri)) {
            res.status = 400;
            res.set_content("malformed IRI\n", "text/plain");
            return;
        }
        std::string best;
        for (const Quad& q : snapshot->match(QuadPattern{Iri(raw_iri), vocab.risk_score(), {}, {}})) {
            if (q.object.is_literal() && q.object.literal().is_decimal()) {
                const std::string& lexical = q.object.literal().lexical();
                if (best.empty() || compare_decimal(lexical, best) > 0) best = lexical;
            }
        }
        if (best.empty()) {
            res.status = 404;
            res.set_content("no risk score for this patient\n", "text/plain");
            return;
        }
        res.set_content(best + "\n", "text/plain");
    }

    void handle_alarms(httplib::Response& res) {
        std::string out;
        for (const Alarm& a : report.alarms) {
            out += a.patient.value() + "\t" + a.doctor.value() + "\t" +
                   format_probability(a.risk) + "\t" + format_probability(a.threshold) + "\t" +
                   std::to_string(a.sequence) + "\n";
        }
        res.set_content(out, "text/plain");
    }
};

MonitorServer::MonitorServer(std::shared_ptr<const Dataset> snapshot, MonitorReport report,
                             Vocabulary vocab)
    : impl_(std::make_unique<Impl>(std::move(snapshot), std::move(report), std::move(vocab))) {}

MonitorServer::~MonitorServer() {
    stop();
}

bool MonitorServer::listen(const std::string& host, int port) {
    return impl_->server.listen(host, port);
}

int MonitorServer::bind_any_port(const std::string& host) {
    return impl_->server.bind_to_any_port(host);
}

bool MonitorServer::listen_after_bind() {
    return impl_->server.listen_after_bind();
}

void MonitorServer::wait_until_ready() const {
    impl_->server.wait_until_ready();
}

void MonitorServer::stop() {
    if (impl_ && impl_->server.is_running()) impl_->server.stop();
}

}  // namespace medgraph
