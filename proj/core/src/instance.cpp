#include "mils/instance.hpp"

#include "mils/rng.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <numeric>
#include <ostream>
#include <sstream>

namespace mils {

namespace {

std::string trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r\n");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r\n");
    return std::string(s.substr(first, last - first + 1));
}

double nearest_int(double x) { return std::floor(x + 0.5); }

}  // namespace

std::string_view to_string(Metric metric) {
    switch (metric) {
        case Metric::RealEuclidean: return "real";
        case Metric::RoundedEuclidean: return "rounded";
        case Metric::CeilEuclidean: return "ceil";
        case Metric::Att: return "att";
    }
    return "real";
}

std::optional<Metric> metric_from_string(std::string_view text) {
    if (text == "real" || text == "real_euclidean") return Metric::RealEuclidean;
    if (text == "rounded" || text == "rounded_euclidean") return Metric::RoundedEuclidean;
    if (text == "ceil" || text == "ceil_euclidean") return Metric::CeilEuclidean;
    if (text == "att") return Metric::Att;
    return std::nullopt;
}

double metric_distance(Metric metric, const Point &a, const Point &b) {
    const double dx = a.x - b.x;
    const double dy = a.y - b.y;
    switch (metric) {
        case Metric::RealEuclidean: return std::sqrt(dx * dx + dy * dy);
        case Metric::RoundedEuclidean: return nearest_int(std::sqrt(dx * dx + dy * dy));
        case Metric::CeilEuclidean: return std::ceil(std::sqrt(dx * dx + dy * dy));
        case Metric::Att: {
            const double r = std::sqrt((dx * dx + dy * dy) / 10.0);
            const double t = nearest_int(r);
            return t < r ? t + 1.0 : t;
        }
    }
    return 0.0;
}

Instance::Instance(std::string name, std::vector<Point> vertices, Metric metric)
    : name_(std::move(name)), coords_(std::move(vertices)), metric_(metric) {
    if (coords_.size() < 2) throw std::invalid_argument("instance needs a depot and at least one city");
    for (const auto &p : coords_) {
        if (!std::isfinite(p.x) || !std::isfinite(p.y))
            throw std::invalid_argument("instance coordinates must be finite");
    }
    if (num_vertices() <= kMatrixLimit) {
        const std::size_t nv = coords_.size();
        matrix_.assign(nv * nv, 0.0);
        for (std::size_t i = 0; i < nv; ++i) {
            for (std::size_t j = i + 1; j < nv; ++j) {
                const double d = metric_distance(metric_, coords_[i], coords_[j]);
                matrix_[i * nv + j] = d;
                matrix_[j * nv + i] = d;
            }
        }
    }
}

double Instance::checked_distance(int i, int j) const {
    if (i < 0 || j < 0 || i >= num_vertices() || j >= num_vertices())
        throw std::out_of_range("vertex index out of range");
    return distance(i, j);
}

Instance Instance::with_metric(Metric metric) const { return Instance(name_, coords_, metric); }

NeighborList::NeighborList(const Instance &instance, int alpha) {
    if (alpha < 1) throw std::invalid_argument("alpha must be positive");
    const int nv = instance.num_vertices();
    width_ = std::min(alpha, nv - 1);
    lists_.resize(static_cast<std::size_t>(nv) * static_cast<std::size_t>(width_));

    std::vector<int> others(static_cast<std::size_t>(nv - 1));
    for (int v = 0; v < nv; ++v) {
        std::size_t k = 0;
        for (int w = 0; w < nv; ++w)
            if (w != v) others[k++] = w;
        auto closer = [&](int a, int b) {
            const double da = instance.distance(v, a);
            const double db = instance.distance(v, b);
            return da < db || (da == db && a < b);
        };
        std::partial_sort(others.begin(), others.begin() + width_, others.end(), closer);
        std::copy_n(others.begin(), width_,
                    lists_.begin() + static_cast<std::ptrdiff_t>(v) * width_);
    }
}

ParseError::ParseError(int line, const std::string &what)
    : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}

Instance parse_tsplib(std::istream &in, std::optional<Metric> metric_override) {
    std::string name = "unnamed";
    std::optional<int> dimension;
    std::optional<Metric> metric;
    std::vector<Point> coords;
    std::vector<bool> seen;
    bool in_coords = false;
    int line_no = 0;
    int coord_lines = 0;
    std::string line;

    while (std::getline(in, line)) {
        ++line_no;
        const std::string text = trim(line);
        if (text.empty()) continue;
        if (text == "EOF") break;

        if (in_coords) {
            std::istringstream row(text);
            long id = 0;
            Point p;
            if (!(row >> id >> p.x >> p.y)) throw ParseError(line_no, "malformed coordinate line '" + text + "'");
            if (id < 1 || id > *dimension)
                throw ParseError(line_no, "node id " + std::to_string(id) + " outside 1.." + std::to_string(*dimension));
            if (seen[static_cast<std::size_t>(id - 1)])
                throw ParseError(line_no, "duplicate node id " + std::to_string(id));
            if (!std::isfinite(p.x) || !std::isfinite(p.y)) throw ParseError(line_no, "non-finite coordinate");
            seen[static_cast<std::size_t>(id - 1)] = true;
            coords[static_cast<std::size_t>(id - 1)] = p;
            ++coord_lines;
            continue;
        }

        if (text == "NODE_COORD_SECTION") {
            if (!dimension) throw ParseError(line_no, "NODE_COORD_SECTION before DIMENSION");
            if (!metric) throw ParseError(line_no, "NODE_COORD_SECTION before EDGE_WEIGHT_TYPE");
            coords.assign(static_cast<std::size_t>(*dimension), Point{});
            seen.assign(static_cast<std::size_t>(*dimension), false);
            in_coords = true;
            continue;
        }

        const auto colon = text.find(':');
        if (colon == std::string::npos) throw ParseError(line_no, "malformed header line '" + text + "'");
        const std::string key = trim(std::string_view(text).substr(0, colon));
        const std::string value = trim(std::string_view(text).substr(colon + 1));

        if (key == "NAME") {
            name = value;
        } else if (key == "DIMENSION") {
            int dim = 0;
            const auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), dim);
            if (ec != std::errc{} || ptr != value.data() + value.size() || dim < 2)
                throw ParseError(line_no, "invalid DIMENSION '" + value + "'");
            dimension = dim;
        } else if (key == "EDGE_WEIGHT_TYPE") {
            if (value == "EUC_2D") metric = Metric::RealEuclidean;
            else if (value == "ATT") metric = Metric::Att;
            else if (value == "CEIL_2D") metric = Metric::CeilEuclidean;
            else throw ParseError(line_no, "unsupported EDGE_WEIGHT_TYPE '" + value + "'");
        }
        // TYPE, COMMENT and the remaining keys carry nothing we use.
    }

    if (!in_coords) throw ParseError(line_no, "missing NODE_COORD_SECTION");
    if (coord_lines != *dimension)
        throw ParseError(line_no, "DIMENSION is " + std::to_string(*dimension) + " but " +
                                      std::to_string(coord_lines) + " coordinates were given");

    return Instance(std::move(name), std::move(coords), metric_override.value_or(*metric));
}

Instance read_tsplib_file(const std::filesystem::path &path, std::optional<Metric> metric_override) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open instance file " + path.string());
    return parse_tsplib(in, metric_override);
}

std::string format_double(double value) {
    char buf[64];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, value);
    return std::string(buf, ptr);
}

void write_tsplib(std::ostream &out, const Instance &instance) {
    const char *type = "EUC_2D";
    if (instance.metric() == Metric::Att) type = "ATT";
    else if (instance.metric() == Metric::CeilEuclidean) type = "CEIL_2D";

    out << "NAME : " << instance.name() << '\n'
        << "TYPE : TSP\n"
        << "DIMENSION : " << instance.num_vertices() << '\n'
        << "EDGE_WEIGHT_TYPE : " << type << '\n'
        << "NODE_COORD_SECTION\n";
    for (int v = 0; v < instance.num_vertices(); ++v) {
        const Point &p = instance.coord(v);
        out << v + 1 << ' ' << format_double(p.x) << ' ' << format_double(p.y) << '\n';
    }
    out << "EOF\n";
}

Instance generate_random(int n, double width, std::uint64_t seed, std::string name) {
    if (n < 1) throw std::invalid_argument("generate_random: n must be at least 1");
    if (!(width > 0.0)) throw std::invalid_argument("generate_random: width must be positive");
    Rng rng(seed);
    std::vector<Point> pts(static_cast<std::size_t>(n) + 1);
    for (auto &p : pts) {
        p.x = rng.uniform() * width;
        p.y = rng.uniform() * width;
    }
    if (name.empty()) name = "rand" + std::to_string(n) + "-s" + std::to_string(seed);
    return Instance(std::move(name), std::move(pts), Metric::RealEuclidean);
}

}  // namespace mils
