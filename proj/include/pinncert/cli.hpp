#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace pinncert::cli {

// Plain-text config: [section] headers and key = value lines, expressions
// quoted. Keys outside the fixed schema are rejected at parse time; missing
// required keys are reported by their section.key path.
class IniFile {
public:
    static IniFile parse_text(const std::string& text,
                              const std::string& origin = "<config>");
    static IniFile load(const std::string& path);

    bool has(const std::string& section, const std::string& key) const;
    std::optional<std::string> get(const std::string& section,
                                   const std::string& key) const;
    std::string require(const std::string& section, const std::string& key) const;

    double get_double(const std::string& section, const std::string& key,
                      double fallback) const;
    int get_int(const std::string& section, const std::string& key, int fallback) const;
    bool get_bool(const std::string& section, const std::string& key,
                  bool fallback) const;

private:
    std::string origin_;
    std::vector<std::pair<std::string, std::string>> entries_;  // "section.key" -> value
    friend class IniBuilder;
};

// Sweep value lists: "lo:hi:Nlog" (log-spaced), "lo:hi:Nlin" or "lo:hi:N"
// (linear), or a comma-separated list.
std::vector<double> parse_values(const std::string& text);

// Entry point shared by the executable and in-process tests. args excludes
// the program name. Exit codes: 0 success, 1 validation or config failure,
// 2 certificate failure.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);
int run(const std::vector<std::string>& args);

}  // namespace pinncert::cli
