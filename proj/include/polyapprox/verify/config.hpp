#pragma once

#include <fstream>
#include <istream>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace polyapprox::verify {

namespace detail {

inline std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

}  // namespace detail

// Flat INI-style configuration: `key = value` lines grouped under
// `[section]` headers.  Lookups resolve section -> [global] -> built-in
// default, so a config file only needs the knobs it wants to move.
class Config {
public:
    Config() = default;

    static Config parse(std::istream& in) {
        Config cfg;
        std::string line;
        std::string section = "global";
        int lineno = 0;
        while (std::getline(in, line)) {
            ++lineno;
            std::string t = detail::trim(line);
            if (t.empty() || t[0] == '#' || t[0] == ';') continue;
            if (t.front() == '[') {
                if (t.back() != ']' || t.size() < 3)
                    throw std::runtime_error("config line " + std::to_string(lineno) +
                                             ": malformed section header");
                section = detail::trim(t.substr(1, t.size() - 2));
                if (section.empty())
                    throw std::runtime_error("config line " + std::to_string(lineno) +
                                             ": empty section name");
                continue;
            }
            const auto eq = t.find('=');
            if (eq == std::string::npos)
                throw std::runtime_error("config line " + std::to_string(lineno) +
                                         ": expected key = value");
            const std::string key = detail::trim(t.substr(0, eq));
            const std::string val = detail::trim(t.substr(eq + 1));
            if (key.empty())
                throw std::runtime_error("config line " + std::to_string(lineno) + ": empty key");
            cfg.sections_[section][key] = val;
        }
        return cfg;
    }

    static Config parse_file(const std::string& path) {
        std::ifstream in(path);
        if (!in) throw std::runtime_error("config: cannot open " + path);
        return parse(in);
    }

    static Config parse_string(const std::string& text) {
        std::istringstream in(text);
        return parse(in);
    }

    void set(const std::string& section, const std::string& key, const std::string& val) {
        sections_[section][key] = val;
    }

    // Raw lookup with the section -> global fallback; empty result means
    // the key is absent and the caller's default applies.
    const std::string* raw(const std::string& section, const std::string& key) const {
        for (const std::string& sec : {section, std::string("global")}) {
            auto it = sections_.find(sec);
            if (it == sections_.end()) continue;
            auto kt = it->second.find(key);
            if (kt != it->second.end()) return &kt->second;
        }
        return nullptr;
    }

    int get_int(const std::string& section, const std::string& key, int dflt) const {
        const std::string* v = raw(section, key);
        if (!v) return dflt;
        try {
            std::size_t pos = 0;
            int out = std::stoi(*v, &pos);
            if (pos != v->size()) throw std::invalid_argument("trailing");
            return out;
        } catch (const std::exception&) {
            throw std::runtime_error("config: key '" + key + "' in [" + section +
                                     "] is not an integer: " + *v);
        }
    }

    double get_double(const std::string& section, const std::string& key, double dflt) const {
        const std::string* v = raw(section, key);
        if (!v) return dflt;
        try {
            std::size_t pos = 0;
            double out = std::stod(*v, &pos);
            if (pos != v->size()) throw std::invalid_argument("trailing");
            return out;
        } catch (const std::exception&) {
            throw std::runtime_error("config: key '" + key + "' in [" + section +
                                     "] is not a number: " + *v);
        }
    }

    bool get_bool(const std::string& section, const std::string& key, bool dflt) const {
        const std::string* v = raw(section, key);
        if (!v) return dflt;
        if (*v == "on" || *v == "true" || *v == "1" || *v == "yes") return true;
        if (*v == "off" || *v == "false" || *v == "0" || *v == "no") return false;
        throw std::runtime_error("config: key '" + key + "' in [" + section +
                                 "] is not a boolean: " + *v);
    }

    std::string get_string(const std::string& section, const std::string& key,
                           const std::string& dflt) const {
        const std::string* v = raw(section, key);
        return v ? *v : dflt;
    }

    std::vector<int> get_int_list(const std::string& section, const std::string& key,
                                  std::vector<int> dflt) const {
        const std::string* v = raw(section, key);
        if (!v) return dflt;
        std::vector<int> out;
        for (const std::string& tok : split(*v)) {
            try {
                out.push_back(std::stoi(tok));
            } catch (const std::exception&) {
                throw std::runtime_error("config: key '" + key + "' in [" + section +
                                         "] has a non-integer entry: " + tok);
            }
        }
        if (out.empty())
            throw std::runtime_error("config: key '" + key + "' in [" + section + "] is empty");
        return out;
    }

    std::vector<double> get_double_list(const std::string& section, const std::string& key,
                                        std::vector<double> dflt) const {
        const std::string* v = raw(section, key);
        if (!v) return dflt;
        std::vector<double> out;
        for (const std::string& tok : split(*v)) {
            try {
                out.push_back(std::stod(tok));
            } catch (const std::exception&) {
                throw std::runtime_error("config: key '" + key + "' in [" + section +
                                         "] has a non-numeric entry: " + tok);
            }
        }
        if (out.empty())
            throw std::runtime_error("config: key '" + key + "' in [" + section + "] is empty");
        return out;
    }

private:
    static std::vector<std::string> split(const std::string& s) {
        std::vector<std::string> out;
        std::string cur;
        std::istringstream ss(s);
        while (std::getline(ss, cur, ',')) {
            cur = detail::trim(cur);
            if (!cur.empty()) out.push_back(cur);
        }
        return out;
    }

    std::map<std::string, std::map<std::string, std::string>> sections_;
};

}  // namespace polyapprox::verify
