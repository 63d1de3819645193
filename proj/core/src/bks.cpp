#include "mils/bks.hpp"

#include <fstream>
#include <istream>
#include <sstream>
#include <stdexcept>
#include <vector>

namespace mils {

BksRegistry BksRegistry::parse(std::istream &in) {
    BksRegistry registry;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line[0] == '#') continue;
        if (line_no == 1 && line.rfind("instance,", 0) == 0) continue;
        std::vector<std::string> fields;
        std::istringstream row(line);
        for (std::string field; std::getline(row, field, ',');) fields.push_back(field);
        if (fields.size() < 3)
            throw std::runtime_error("bks line " + std::to_string(line_no) + ": expected instance,m,bks[,optimal]");
        BksEntry entry;
        int m = 0;
        try {
            entry.value = std::stod(fields[2]);
            m = std::stoi(fields[1]);
        } catch (const std::logic_error &) {
            throw std::runtime_error("bks line " + std::to_string(line_no) + ": malformed number");
        }
        entry.optimal = fields.size() > 3 && fields[3] == "1";
        registry.add(fields[0], m, entry);
    }
    return registry;
}

BksRegistry BksRegistry::load(const std::filesystem::path &path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open BKS file " + path.string());
    return parse(in);
}

void BksRegistry::add(const std::string &name, int m, BksEntry entry) {
    if (!(entry.value > 0.0)) throw std::invalid_argument("BKS values must be positive");
    if (!entries_.emplace(std::make_pair(name, m), entry).second)
        throw std::invalid_argument("duplicate BKS entry for " + name + " m=" + std::to_string(m));
}

std::optional<BksEntry> BksRegistry::find(const std::string &name, int m) const {
    const auto it = entries_.find({name, m});
    if (it == entries_.end()) return std::nullopt;
    return it->second;
}

double gap_percent(double value, double bks) { return 100.0 * (value - bks) / bks; }

}  // namespace mils
