// Exact single-tour solver usable as `mils solve --tour-improver mils-hk-tour`.
//
// Usage: mils-hk-tour <in.tsp> <out.tour>
// Writes 1-based node ids, one per line, starting with node 1.

#include "mils/exact.hpp"
#include "mils/instance.hpp"

#include <exception>
#include <fstream>
#include <iostream>
#include <numeric>

int main(int argc, char **argv) {
    if (argc != 3) {
        std::cerr << "usage: mils-hk-tour <in.tsp> <out.tour>\n";
        return 2;
    }
    try {
        const mils::Instance instance = mils::read_tsplib_file(argv[1]);
        std::vector<int> cities(static_cast<std::size_t>(instance.num_cities()));
        std::iota(cities.begin(), cities.end(), 1);
        const mils::Tour tour = mils::held_karp_tour(instance, cities);
        std::ofstream out(argv[2]);
        out << 1 << '\n';
        for (int c : tour) out << c + 1 << '\n';
        return out ? 0 : 1;
    } catch (const std::exception &e) {
        std::cerr << "mils-hk-tour: " << e.what() << '\n';
        return 1;
    }
}
