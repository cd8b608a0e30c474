#pragma once

// A fiber F(d) is the set of four-tuples sharing one domain value, with
// bidirectional indexes: (from, rel) -> targets and (rel, to) -> sources.
// FiberView is a read-only union of a target fiber and the shared
// @Universal fiber; it never merges stored fibers.

#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "cdc/tuple.hpp"

namespace cdc {

class Fiber {
public:
    using Key = std::pair<std::string, std::string>;
    using Index = std::map<Key, std::set<std::string>>;

    explicit Fiber(DomainPath domain) : domain_(std::move(domain)) {}

    const DomainPath& domain() const { return domain_; }
    size_t size() const { return records_.size(); }
    bool empty() const { return records_.empty(); }
    const std::set<FourTuple>& records() const { return records_; }

    // false = duplicate (no-op)
    bool add(const FourTuple& t) {
        if (!(t.domain == domain_))
            raise(ErrorCode::MalformedTuple,
                  "record domain " + t.domain.raw() + " does not match fiber " +
                      domain_.raw());
        if (!records_.insert(t).second) return false;
        fwd_[{t.from, t.rel}].insert(t.to);
        bwd_[{t.rel, t.to}].insert(t.from);
        ++concept_refs_[t.from];
        ++concept_refs_[t.to];
        return true;
    }

    // false = absent
    bool remove(const FourTuple& t) {
        if (records_.erase(t) == 0) return false;
        erase_from(fwd_, {t.from, t.rel}, t.to);
        erase_from(bwd_, {t.rel, t.to}, t.from);
        unref(t.from);
        unref(t.to);
        return true;
    }

    bool contains(const FourTuple& t) const { return records_.count(t) > 0; }

    const std::set<std::string>* forward(const std::string& from,
                                         const std::string& rel) const {
        auto it = fwd_.find({from, rel});
        return it == fwd_.end() ? nullptr : &it->second;
    }

    const std::set<std::string>* backward(const std::string& rel,
                                          const std::string& to) const {
        auto it = bwd_.find({rel, to});
        return it == bwd_.end() ? nullptr : &it->second;
    }

    const Index& forward_index() const { return fwd_; }
    const Index& backward_index() const { return bwd_; }

    // concept occurs in from or to position of some record
    bool has_concept(const std::string& name) const {
        return concept_refs_.count(name) > 0;
    }

    // distinct concepts appearing in the from position
    std::set<std::string> subjects() const {
        std::set<std::string> out;
        for (const auto& [key, targets] : fwd_)
            if (!targets.empty()) out.insert(key.first);
        return out;
    }

private:
    static void erase_from(Index& idx, const Key& key, const std::string& value) {
        auto it = idx.find(key);
        if (it == idx.end()) return;
        it->second.erase(value);
        if (it->second.empty()) idx.erase(it);
    }

    void unref(const std::string& name) {
        auto it = concept_refs_.find(name);
        if (it != concept_refs_.end() && --it->second == 0)
            concept_refs_.erase(it);
    }

    DomainPath domain_;
    std::set<FourTuple> records_;
    Index fwd_;
    Index bwd_;
    std::map<std::string, int> concept_refs_;
};

class FiberView {
public:
    FiberView(const Fiber* primary, const Fiber* shared)
        : primary_(primary), shared_(shared == primary ? nullptr : shared) {}

    const Fiber* primary() const { return primary_; }
    const Fiber* shared() const { return shared_; }

    size_t size() const {
        return (primary_ ? primary_->size() : 0) + (shared_ ? shared_->size() : 0);
    }

    template <typename Fn>
    void each_record(Fn&& fn) const {
        if (primary_)
            for (const auto& t : primary_->records()) fn(t);
        if (shared_)
            for (const auto& t : shared_->records()) fn(t);
    }

    // Out-edges of `from` via `rel`, reconstructed as full records so the
    // caller sees which fiber (target or shared) each edge lives in.
    template <typename Fn>
    void each_out_edge(const std::string& from, const std::string& rel,
                       Fn&& fn) const {
        for (const Fiber* f : {primary_, shared_}) {
            if (!f) continue;
            if (const auto* targets = f->forward(from, rel))
                for (const auto& to : *targets)
                    fn(FourTuple(from, rel, f->domain(), to));
        }
    }

    template <typename Fn>
    void each_in_edge(const std::string& rel, const std::string& to,
                      Fn&& fn) const {
        for (const Fiber* f : {primary_, shared_}) {
            if (!f) continue;
            if (const auto* sources = f->backward(rel, to))
                for (const auto& from : *sources)
                    fn(FourTuple(from, rel, f->domain(), to));
        }
    }

    bool has_concept(const std::string& name) const {
        return (primary_ && primary_->has_concept(name)) ||
               (shared_ && shared_->has_concept(name));
    }

    bool contains(const FourTuple& t) const {
        return (primary_ && primary_->contains(t)) ||
               (shared_ && shared_->contains(t));
    }

    std::set<std::string> subjects() const {
        std::set<std::string> out;
        for (const Fiber* f : {primary_, shared_})
            if (f) {
                auto s = f->subjects();
                out.insert(s.begin(), s.end());
            }
        return out;
    }

private:
    const Fiber* primary_;
    const Fiber* shared_;
};

} // namespace cdc
