#pragma once

#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <utility>

namespace mils {

struct BksEntry {
    double value = 0.0;
    bool optimal = false;
};

/// Best-known objective values keyed by (instance name, m).
///
/// CSV layout: header "instance,m,bks,optimal" then one row per entry;
/// `optimal` is 0 or 1.
class BksRegistry {
public:
    static BksRegistry parse(std::istream &in);
    static BksRegistry load(const std::filesystem::path &path);

    void add(const std::string &name, int m, BksEntry entry);
    std::optional<BksEntry> find(const std::string &name, int m) const;
    std::size_t size() const { return entries_.size(); }

private:
    std::map<std::pair<std::string, int>, BksEntry> entries_;
};

/// Relative gap in percent: 100 * (value - bks) / bks.
double gap_percent(double value, double bks);

}  // namespace mils
