// tiling.hpp
// Plane-tile diagrams of a set in the bipartition {party} vs the rest:
// rows are the party's levels, columns the remaining parties' computational
// basis in row-major order.  Each block becomes one rectangle per contiguous
// column run; ascii and svg renderings share the rectangle model.

#pragma once

#include <string>
#include <vector>

#include "sqn/construction.hpp"

namespace sqn {

struct TileRect {
    int block = -1;
    BlockClass cls = BlockClass::C;
    std::vector<int> q;
    int row0 = 0, row1 = 0;        // half-open level range on the chosen party
    long long col0 = 0, col1 = 0;  // half-open flattened column range
};

struct TileModel {
    int party = 0;  // 1-based
    int rows = 0;
    long long cols = 0;
    std::vector<int> dims;
    std::vector<TileRect> rects;
};

TileModel build_tile_model(const StateSet& set, int party);

std::string render_ascii(const TileModel& model);
std::string render_svg(const TileModel& model);

}  // namespace sqn
