#pragma once

#include <map>
#include <string>
#include <vector>

namespace lamlab {

// Flat key = value file with [section] headers. See README for the grammar.
class Config {
public:
    struct Entry {
        std::string value;
        int line = 0;  // 0 for command-line overrides
    };
    using Section = std::map<std::string, Entry>;

    static Config parse(const std::string& text, const std::string& origin = "<config>");
    static Config load(const std::string& path);

    void set(const std::string& section, const std::string& key, const std::string& value);
    bool has(const std::string& section, const std::string& key) const;
    const std::map<std::string, Section>& sections() const { return sections_; }
    const std::string& origin() const { return origin_; }

    // Typed getters; ConfigError names the key on malformed values.
    std::string str(const std::string& section, const std::string& key, const std::string& def) const;
    double num(const std::string& section, const std::string& key, double def) const;
    int integer(const std::string& section, const std::string& key, int def) const;
    std::vector<double> list(const std::string& section, const std::string& key,
                             const std::vector<double>& def) const;

    // Rejects unknown sections/keys, non-positive tolerances and missing files.
    void validate() const;

private:
    std::map<std::string, Section> sections_;
    std::string origin_;
    [[noreturn]] void fail(const std::string& section, const std::string& key, const std::string& msg) const;
};

std::vector<double> parse_number_list(const std::string& s);

}  // namespace lamlab
