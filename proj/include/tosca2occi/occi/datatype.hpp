#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <regex>
#include <string>
#include <variant>
#include <vector>

#include <nlohmann/json.hpp>

namespace tosca2occi::occi {

using Json = nlohmann::json;

/// Reference to a named DataType. Names resolve within the owning extension
/// first, then through its imports.
using DataTypeRef = std::string;

struct StringType {
    std::optional<std::string> pattern;
    std::optional<std::int64_t> min_length;
    bool operator==(const StringType&) const = default;
};

enum class NumericKind { Integer, Float, Short };

struct NumericType {
    NumericKind kind = NumericKind::Integer;
    std::optional<double> min_inclusive;
    std::optional<double> max_inclusive;
    bool operator==(const NumericType&) const = default;
};

struct BooleanType {
    bool operator==(const BooleanType&) const = default;
};

struct EnumerationType {
    std::vector<std::string> literals; // nonempty, distinct
    bool operator==(const EnumerationType&) const = default;
};

struct ArrayType {
    DataTypeRef element_type;
    bool operator==(const ArrayType&) const = default;
};

struct RecordField {
    std::string name;
    DataTypeRef type;
    bool operator==(const RecordField&) const = default;
};

struct RecordType {
    std::vector<RecordField> fields; // nonempty, names distinct
    bool operator==(const RecordType&) const = default;
};

using DataType =
    std::variant<StringType, NumericType, BooleanType, EnumerationType, ArrayType, RecordType>;

/// Resolves a DataTypeRef to a definition, or nullptr when unknown.
using DataTypeResolver = std::function<const DataType*(const DataTypeRef&)>;

namespace detail {

inline bool is_integral_number(const Json& v) {
    if (v.is_number_integer() || v.is_number_unsigned())
        return true;
    if (v.is_number_float()) {
        double d = v.get<double>();
        return d == static_cast<double>(static_cast<std::int64_t>(d));
    }
    return false;
}

} // namespace detail

/// True iff `value` conforms to `dt`: numeric bounds, enum membership, regex,
/// record fields checked recursively. Unresolvable refs inside arrays/records
/// make the value non-conforming.
inline bool check_datatype(const Json& value, const DataType& dt, const DataTypeResolver& resolve,
                           int depth = 0) {
    if (depth > 32)
        return false; // guards against pathological recursive record definitions
    return std::visit(
        [&](const auto& t) -> bool {
            using T = std::decay_t<decltype(t)>;
            if constexpr (std::is_same_v<T, StringType>) {
                if (!value.is_string())
                    return false;
                const auto s = value.get<std::string>();
                if (t.min_length && static_cast<std::int64_t>(s.size()) < *t.min_length)
                    return false;
                if (t.pattern) {
                    std::regex re(*t.pattern);
                    if (!std::regex_match(s, re))
                        return false;
                }
                return true;
            } else if constexpr (std::is_same_v<T, NumericType>) {
                if (!value.is_number())
                    return false;
                if (t.kind != NumericKind::Float && !detail::is_integral_number(value))
                    return false;
                const double d = value.get<double>();
                if (t.kind == NumericKind::Short && (d < -32768.0 || d > 32767.0))
                    return false;
                if (t.min_inclusive && d < *t.min_inclusive)
                    return false;
                if (t.max_inclusive && d > *t.max_inclusive)
                    return false;
                return true;
            } else if constexpr (std::is_same_v<T, BooleanType>) {
                return value.is_boolean();
            } else if constexpr (std::is_same_v<T, EnumerationType>) {
                if (!value.is_string())
                    return false;
                const auto s = value.get<std::string>();
                for (const auto& lit : t.literals)
                    if (lit == s)
                        return true;
                return false;
            } else if constexpr (std::is_same_v<T, ArrayType>) {
                if (!value.is_array())
                    return false;
                const DataType* elem = resolve ? resolve(t.element_type) : nullptr;
                if (!elem)
                    return false;
                for (const auto& item : value)
                    if (!check_datatype(item, *elem, resolve, depth + 1))
                        return false;
                return true;
            } else if constexpr (std::is_same_v<T, RecordType>) {
                if (!value.is_object())
                    return false;
                if (value.size() != t.fields.size())
                    return false;
                for (const auto& field : t.fields) {
                    if (!value.contains(field.name))
                        return false;
                    const DataType* ft = resolve ? resolve(field.type) : nullptr;
                    if (!ft)
                        return false;
                    if (!check_datatype(value.at(field.name), *ft, resolve, depth + 1))
                        return false;
                }
                return true;
            }
        },
        dt);
}

} // namespace tosca2occi::occi
