#pragma once

// Ordered `key: value` text reports. Keys keep insertion order so that the
// same run always prints the same bytes.

#include <sstream>
#include <string>
#include <utility>
#include <vector>

namespace diophex {

class Report {
public:
    Report& add(std::string key, std::string value) {
        entries_.emplace_back(std::move(key), std::move(value));
        return *this;
    }
    template <class T>
    Report& add(std::string key, const T& value) {
        std::ostringstream os;
        os << value;
        return add(std::move(key), os.str());
    }
    Report& add(std::string key, bool value) { return add(std::move(key), std::string(value ? "true" : "false")); }
    Report& add(std::string key, const char* value) { return add(std::move(key), std::string(value)); }

    /// Appends every entry of `other`, keys prefixed with `prefix`.
    Report& merge(const Report& other, const std::string& prefix = "") {
        for (const auto& [k, v] : other.entries_) entries_.emplace_back(prefix + k, v);
        return *this;
    }

    const std::vector<std::pair<std::string, std::string>>& entries() const { return entries_; }

    /// Value of the first entry named `key`, or empty.
    std::string get(const std::string& key) const {
        for (const auto& [k, v] : entries_)
            if (k == key) return v;
        return {};
    }

    std::string str() const {
        std::string out;
        for (const auto& [k, v] : entries_) out += k + ": " + v + "\n";
        return out;
    }

private:
    std::vector<std::pair<std::string, std::string>> entries_;
};

}  // namespace diophex
