#pragma once

#include <regex>

#include "tosca2occi/mapping/rules.hpp"
#include "tosca2occi/occi/json_io.hpp"

// PIM -> PSM transformation: enriches a platform-independent configuration
// with orchestration specifics. Adds a management network, connects every
// compute to it, tags infrastructural resources with a runtime-id mixin and
// fills provider defaults on computes. Idempotent; never mutates its input.

namespace tosca2occi::psm {

namespace refs {
inline const std::string management_network =
    std::string(mapping::schemes::psm) + "management_network";
inline const std::string runtime_id = std::string(mapping::schemes::psm) + "runtime_id";
inline const std::string provider_template =
    std::string(mapping::schemes::psm) + "provider_template";
} // namespace refs

struct PsmProfile {
    std::string provider_name;
    std::string default_image;
    std::string default_flavor;
    std::string ssh_key_name;
    std::optional<std::string> user_data;
    std::string management_cidr;
};

inline PsmProfile profile_from_json(const occi::Json& j) {
    PsmProfile p;
    p.provider_name = j.at("provider_name").get<std::string>();
    p.default_image = j.at("default_image").get<std::string>();
    p.default_flavor = j.at("default_flavor").get<std::string>();
    p.ssh_key_name = j.at("ssh_key_name").get<std::string>();
    if (j.contains("user_data"))
        p.user_data = j.at("user_data").get<std::string>();
    p.management_cidr = j.at("management_cidr").get<std::string>();
    static const std::regex cidr_re(R"(\d{1,3}\.\d{1,3}\.\d{1,3}\.\d{1,3}/\d{1,2})");
    if (!std::regex_match(p.management_cidr, cidr_re))
        throw ParseError("management_cidr '" + p.management_cidr + "' is not IPv4 CIDR");
    return p;
}

inline PsmProfile load_profile(const std::filesystem::path& path) {
    return profile_from_json(occi::parse_json_file(path));
}

namespace detail {

inline bool has_mixin(const occi::Resource& r, const occi::MixinRef& mixin) {
    for (const auto& mb : r.mixin_bases)
        if (mb.mixin == mixin)
            return true;
    return false;
}

inline bool is_infrastructural(const occi::Resource& r, const occi::ExtensionSet& exts) {
    return exts.kind_is_a(r.kind, mapping::kinds::compute) ||
           exts.kind_is_a(r.kind, mapping::kinds::network) ||
           exts.kind_is_a(r.kind, mapping::kinds::storage);
}

} // namespace detail

/// The transformation. Output is a new configuration; pre-existing entities
/// are only ever extended with mixin bases or attribute defaults.
inline occi::Configuration transform(const occi::Configuration& input, const PsmProfile& profile,
                                     const occi::ExtensionSet& exts) {
    occi::Configuration cfg = input;

    if (std::find(cfg.use.begin(), cfg.use.end(), "psm") == cfg.use.end())
        cfg.use.push_back("psm");

    // (a) one management network, detected by its marker mixin
    std::string mgmt_id;
    for (const auto& r : cfg.resources)
        if (detail::has_mixin(r, refs::management_network))
            mgmt_id = r.id;
    if (mgmt_id.empty()) {
        occi::Resource net;
        net.id = "urn:psm:" + profile.provider_name + ":management-network";
        net.kind = mapping::kinds::network;
        net.title = "management network";
        occi::MixinBase mb;
        mb.mixin = refs::management_network;
        mb.attribute_values["address"] = profile.management_cidr;
        net.mixin_bases.push_back(std::move(mb));
        mgmt_id = net.id;
        cfg.resources.push_back(std::move(net));
    }

    // (b) one networkinterface per compute onto the management network
    for (const auto& r : cfg.resources) {
        if (!exts.kind_is_a(r.kind, mapping::kinds::compute))
            continue;
        bool connected = false;
        for (const auto& l : cfg.links)
            if (l.source == r.id && l.target == mgmt_id &&
                exts.kind_is_a(l.kind, mapping::kinds::networkinterface))
                connected = true;
        if (connected)
            continue;
        occi::Link nic;
        nic.id = r.id + ":mgmt-nic";
        nic.kind = mapping::kinds::networkinterface;
        nic.title = r.title + " management interface";
        nic.source = r.id;
        nic.target = mgmt_id;
        cfg.links.push_back(std::move(nic));
    }

    // (c) runtime-id mixin on every infrastructural resource, providerid
    // deliberately unset until the runtime assigns one
    for (auto& r : cfg.resources) {
        if (!detail::is_infrastructural(r, exts))
            continue;
        if (!detail::has_mixin(r, refs::runtime_id))
            r.mixin_bases.push_back({refs::runtime_id, {}});
    }

    // (d) provider defaults on computes, never overwriting modeled values
    for (auto& r : cfg.resources) {
        if (!exts.kind_is_a(r.kind, mapping::kinds::compute))
            continue;
        occi::MixinBase* tmpl = nullptr;
        for (auto& mb : r.mixin_bases)
            if (mb.mixin == refs::provider_template)
                tmpl = &mb;
        if (!tmpl) {
            r.mixin_bases.push_back({refs::provider_template, {}});
            tmpl = &r.mixin_bases.back();
        }
        auto fill = [&](const char* key, const std::string& value) {
            if (!tmpl->attribute_values.count(key))
                tmpl->attribute_values[key] = value;
        };
        fill("image", profile.default_image);
        fill("flavor", profile.default_flavor);
        fill("ssh_key_name", profile.ssh_key_name);
        if (profile.user_data)
            fill("user_data", *profile.user_data);
    }

    return cfg;
}

} // namespace tosca2occi::psm
