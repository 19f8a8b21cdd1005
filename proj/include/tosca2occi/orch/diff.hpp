#pragma once

#include "tosca2occi/occi/model.hpp"

// Desired/current comparison. Entities are matched by their identity, the
// (id, kind) pair; lifecycle state and provider ids never count as drift.

namespace tosca2occi::orch {

using occi::Json;

/// Attributes owned by the runtime, excluded from drift detection.
inline const std::set<std::string>& runtime_owned_attributes() {
    static const std::set<std::string> s{"state", "providerid"};
    return s;
}

inline std::map<std::string, Json> comparable_attributes(const occi::Resource& e) {
    auto merged = occi::merged_attributes(e);
    for (const auto& k : runtime_owned_attributes())
        merged.erase(k);
    return merged;
}

/// One entity as seen by the diff; `data` carries the full desired (or, for
/// deletes, current) entity so later stages can build request payloads.
/// For resources, source/target stay empty.
struct DiffEntry {
    std::string id;
    occi::KindRef kind;
    bool is_link = false;
    occi::Link data;
};

struct DiffResult {
    std::vector<DiffEntry> to_create;
    std::vector<std::pair<DiffEntry, std::map<std::string, Json>>> to_update;
    std::vector<DiffEntry> to_delete;
    std::vector<DiffEntry> unchanged;

    bool empty_delta() const {
        return to_create.empty() && to_update.empty() && to_delete.empty();
    }

    const DiffEntry* find_create(const std::string& id) const {
        for (const auto& e : to_create)
            if (e.id == id)
                return &e;
        return nullptr;
    }
};

namespace detail {

inline DiffEntry make_entry(const occi::Resource& r) {
    DiffEntry e;
    e.id = r.id;
    e.kind = r.kind;
    e.is_link = false;
    static_cast<occi::Resource&>(e.data) = r;
    return e;
}

inline DiffEntry make_entry(const occi::Link& l) {
    DiffEntry e;
    e.id = l.id;
    e.kind = l.kind;
    e.is_link = true;
    e.data = l;
    return e;
}

inline std::map<std::string, DiffEntry> entry_index(const occi::Configuration& cfg) {
    std::map<std::string, DiffEntry> out;
    for (const auto& r : cfg.resources)
        out.emplace(r.id, make_entry(r));
    for (const auto& l : cfg.links)
        out.emplace(l.id, make_entry(l));
    return out;
}

} // namespace detail

/// Classifies every distinct (id, kind) across both configurations exactly
/// once: matched with equal attributes -> unchanged, matched with drift ->
/// to_update (carrying exactly the differing attribute names with their
/// desired values), desired-only -> to_create, current-only -> to_delete.
/// A kind change under the same id is a delete plus a create.
inline DiffResult compare(const occi::Configuration& desired,
                          const occi::Configuration& current) {
    DiffResult diff;
    auto want = detail::entry_index(desired);
    auto have = detail::entry_index(current);

    for (const auto& [id, w] : want) {
        auto it = have.find(id);
        if (it == have.end() || it->second.kind != w.kind) {
            diff.to_create.push_back(w);
            continue;
        }
        auto want_attrs = comparable_attributes(w.data);
        auto have_attrs = comparable_attributes(it->second.data);
        if (want_attrs == have_attrs) {
            diff.unchanged.push_back(w);
            continue;
        }
        std::map<std::string, Json> changed;
        for (const auto& [k, v] : want_attrs) {
            auto h = have_attrs.find(k);
            if (h == have_attrs.end() || h->second != v)
                changed[k] = v;
        }
        for (const auto& [k, v] : have_attrs)
            if (!want_attrs.count(k))
                changed[k] = nullptr; // removed attribute, patched to null
        diff.to_update.emplace_back(w, std::move(changed));
    }
    for (const auto& [id, h] : have) {
        auto it = want.find(id);
        if (it == want.end() || it->second.kind != h.kind)
            diff.to_delete.push_back(h);
    }
    return diff;
}

} // namespace tosca2occi::orch
