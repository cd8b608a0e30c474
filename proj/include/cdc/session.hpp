#pragma once

// A session binds a knowledge base to a frozen meta layer: the typing
// function is materialized once at construction, contradiction rules are
// sealed, and F(@Meta@Logic) becomes read-only until the session ends.
// The typing can differ across sessions when the meta records change in
// between; it never changes within one.

#include <utility>
#include <vector>

#include <json.hpp>

#include "cdc/bridge.hpp"
#include "cdc/inference.hpp"
#include "cdc/knowledge_base.hpp"
#include "cdc/meta_typing.hpp"
#include "cdc/reindex.hpp"
#include "cdc/validation.hpp"

namespace cdc {

struct SessionConfig {
    std::vector<ContradictionRule> contradictions;

    static SessionConfig from_json(const nlohmann::json& j) {
        SessionConfig cfg;
        if (!j.is_object())
            raise(ErrorCode::ParseError, "config must be a JSON object");
        if (j.contains("contradictions")) {
            for (const auto& r : j.at("contradictions"))
                cfg.contradictions.emplace_back(r.at("rel_a").get<std::string>(),
                                                r.at("rel_b").get<std::string>());
        }
        return cfg;
    }

    nlohmann::json to_json() const {
        nlohmann::json arr = nlohmann::json::array();
        for (const auto& r : contradictions)
            arr.push_back({{"rel_a", r.rel_a}, {"rel_b", r.rel_b}});
        return {{"contradictions", std::move(arr)}};
    }
};

class Session {
public:
    explicit Session(KnowledgeBase kb, SessionConfig config = {})
        : kb_(std::move(kb)) {
        for (const auto& rule : config.contradictions)
            validator_.register_contradiction(rule);
        validator_.seal();
        typing_ = MetaTyping::build(kb_);
        typing_.freeze();
        kb_.freeze_meta();
    }

    KnowledgeBase& kb() { return kb_; }
    const KnowledgeBase& kb() const { return kb_; }
    const MetaTyping& typing() const { return typing_; }
    const Validator& validator() const { return validator_; }
    AuditLog& audit() { return audit_; }
    const AuditLog& audit() const { return audit_; }

    ValidationOutcome insert(const FourTuple& t) {
        return validator_.insert(kb_, t, typing_, &audit_);
    }

    // Bulk-load path for pre-validated corpora; still subject to the meta
    // freeze at the store layer.
    AddResult insert_unchecked(const FourTuple& t) { return kb_.add(t); }

    size_t reindex_domain(const DomainPath& child) {
        return cdc::reindex_domain(kb_, child, typing_, validator_, &audit_);
    }

    ReindexReport reindex_all() {
        return cdc::reindex_all(kb_, typing_, validator_, &audit_);
    }

    BridgeOutcome add_bridge(const BridgeRecord& b) {
        return cdc::add_bridge(kb_, b);
    }

private:
    KnowledgeBase kb_;
    MetaTyping typing_;
    Validator validator_;
    AuditLog audit_;
};

} // namespace cdc
