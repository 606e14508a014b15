// Strict reading of JSON documents: every key must be consumed.
#pragma once

#include "gcs/errors.hpp"

#include <json.hpp>

#include <set>
#include <string>
#include <string_view>
#include <type_traits>

namespace gcs::json_util {

using Json = nlohmann::json;

inline Json parse(std::string_view text, const std::string &what) {
    try {
        return Json::parse(text.begin(), text.end());
    } catch (const Json::parse_error &e) {
        throw ValidationError(what + ": " + e.what());
    }
}

inline const Json::array_t &array_of(const Json &j, const std::string &where) {
    if (!j.is_array()) {
        throw ValidationError(where + ": expected an array");
    }
    return j.get_ref<const Json::array_t &>();
}

inline std::string string_of(const Json &j, const std::string &where) {
    if (!j.is_string()) {
        throw ValidationError(where + ": expected a string");
    }
    return j.get<std::string>();
}

class Object {
public:
    Object(const Json &j, std::string where) : j_(j), where_(std::move(where)) {
        if (!j_.is_object()) {
            throw ValidationError(where_ + ": expected an object");
        }
    }

    const Json *find(const std::string &key) const {
        const auto it = j_.find(key);
        if (it == j_.end()) {
            return nullptr;
        }
        used_.insert(key);
        return &*it;
    }

    template <typename T> bool read(const std::string &key, T &out) const {
        const Json *v = find(key);
        if (v == nullptr) {
            return false;
        }
        convert(*v, key, out);
        return true;
    }

    template <typename T> void require(const std::string &key, T &out) const {
        if (!read(key, out)) {
            throw ValidationError(where_ + ": missing '" + key + "'");
        }
    }

    /// Rejects keys that were never looked up.
    void finish() const {
        for (auto it = j_.begin(); it != j_.end(); ++it) {
            if (used_.count(it.key()) == 0) {
                throw ValidationError(where_ + ": unknown key '" + it.key() + "'");
            }
        }
    }

private:
    template <typename T> void convert(const Json &v, const std::string &key, T &out) const {
        const std::string at = where_ + "." + key;
        if constexpr (std::is_same_v<T, bool>) {
            if (!v.is_boolean()) {
                throw ValidationError(at + ": expected true or false");
            }
            out = v.get<bool>();
        } else if constexpr (std::is_integral_v<T>) {
            if (!v.is_number_integer()) {
                throw ValidationError(at + ": expected an integer");
            }
            out = v.get<T>();
        } else if constexpr (std::is_floating_point_v<T>) {
            if (!v.is_number()) {
                throw ValidationError(at + ": expected a number");
            }
            out = v.get<T>();
        } else {
            out = string_of(v, at);
        }
    }

    const Json &j_;
    std::string where_;
    mutable std::set<std::string> used_;
};

} // namespace gcs::json_util
