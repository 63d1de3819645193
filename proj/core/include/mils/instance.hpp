#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace mils {

/// Vertex 0 is always the depot; vertices 1..n are the cities.
inline constexpr int kDepot = 0;

enum class Metric {
    RealEuclidean,     // unrounded sqrt
    RoundedEuclidean,  // nearest integer (TSPLIB EUC_2D)
    CeilEuclidean,     // TSPLIB CEIL_2D
    Att,               // TSPLIB pseudo-Euclidean
};

std::string_view to_string(Metric metric);
std::optional<Metric> metric_from_string(std::string_view text);

struct Point {
    double x = 0.0;
    double y = 0.0;
};

double metric_distance(Metric metric, const Point &a, const Point &b);

/// A minmax mTSP instance: one depot plus n cities in the plane.
///
/// Distances are cached in a dense matrix up to kMatrixLimit vertices and
/// computed on demand above that. Immutable after construction.
class Instance {
public:
    static constexpr int kMatrixLimit = 3000;

    Instance(std::string name, std::vector<Point> vertices, Metric metric);

    const std::string &name() const { return name_; }
    Metric metric() const { return metric_; }
    int num_cities() const { return static_cast<int>(coords_.size()) - 1; }
    int num_vertices() const { return static_cast<int>(coords_.size()); }
    const Point &coord(int v) const { return coords_[static_cast<std::size_t>(v)]; }
    const std::vector<Point> &coords() const { return coords_; }

    double distance(int i, int j) const {
        if (!matrix_.empty())
            return matrix_[static_cast<std::size_t>(i) * coords_.size() + static_cast<std::size_t>(j)];
        return metric_distance(metric_, coords_[static_cast<std::size_t>(i)],
                               coords_[static_cast<std::size_t>(j)]);
    }

    /// Same as distance() but throws std::out_of_range on a bad index.
    double checked_distance(int i, int j) const;

    Instance with_metric(Metric metric) const;

private:
    std::string name_;
    std::vector<Point> coords_;
    Metric metric_;
    std::vector<double> matrix_;
};

/// Each vertex's alpha nearest other vertices, sorted by (distance, index).
class NeighborList {
public:
    NeighborList(const Instance &instance, int alpha);

    int alpha() const { return width_; }
    std::span<const int> of(int v) const {
        return {lists_.data() + static_cast<std::size_t>(v) * static_cast<std::size_t>(width_),
                static_cast<std::size_t>(width_)};
    }

private:
    int width_ = 0;
    std::vector<int> lists_;
};

class ParseError : public std::runtime_error {
public:
    ParseError(int line, const std::string &what);
    int line() const { return line_; }

private:
    int line_;
};

/// Reads the TSPLIB subset used by the benchmark files (EUC_2D, ATT and
/// CEIL_2D node coordinates). The first node becomes the depot.
Instance parse_tsplib(std::istream &in, std::optional<Metric> metric_override = std::nullopt);
Instance read_tsplib_file(const std::filesystem::path &path,
                          std::optional<Metric> metric_override = std::nullopt);
void write_tsplib(std::ostream &out, const Instance &instance);

/// Depot and n cities drawn uniformly from [0, width]^2.
Instance generate_random(int n, double width, std::uint64_t seed, std::string name = {});

/// Shortest decimal text that parses back to the same double.
std::string format_double(double value);

}  // namespace mils
