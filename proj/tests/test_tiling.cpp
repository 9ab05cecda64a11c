#include "doctest.h"

#include <set>

#include "sqn/tiling.hpp"

using namespace sqn;

namespace {

// paint the rectangles onto the grid; returns false on any overlap
bool paint(const TileModel& model, std::set<std::pair<int, long long>>& cells) {
    for (const auto& rect : model.rects)
        for (int r = rect.row0; r < rect.row1; ++r)
            for (long long c = rect.col0; c < rect.col1; ++c)
                if (!cells.emplace(r, c).second) return false;
    return true;
}

}  // namespace

TEST_SUITE_BEGIN("tiling");

TEST_CASE("two-party model is the classic domino picture") {
    const TileModel model = build_tile_model(build_f({3, 3}), 1);
    CHECK(model.rows == 3);
    CHECK(model.cols == 3);
    std::set<std::pair<int, long long>> cells;
    CHECK(paint(model, cells));
    CHECK(cells.size() == 8);
    CHECK_FALSE(cells.count({1, 1}));  // the centre stays open
}

TEST_CASE("four-party model covers everything but the middle column band") {
    const StateSet e4 = build_e(4);
    const TileModel model = build_tile_model(e4, 1);
    CHECK(model.rows == 3);
    CHECK(model.cols == 27);
    std::set<std::pair<int, long long>> cells;
    CHECK(paint(model, cells));
    CHECK(cells.size() == 80);
    // uncovered cells are exactly the middle box: row 1, columns with all
    // interior coordinates; for qutrits that is the single column 1*9+1*3+1=13
    CHECK_FALSE(cells.count({1, 13}));
    long long covered = 0;
    for (int r = 0; r < 3; ++r)
        for (long long c = 0; c < 27; ++c) covered += cells.count({r, c});
    CHECK(covered == 80);

    // every bipartition tiles the same number of cells
    for (int party = 2; party <= 4; ++party) {
        std::set<std::pair<int, long long>> other;
        CHECK(paint(build_tile_model(e4, party), other));
        CHECK(other.size() == 80);
    }
}

TEST_CASE("renderings share the rectangle model") {
    const TileModel model = build_tile_model(build_f({3, 3, 3, 4}), 2);
    const std::string ascii = render_ascii(model);
    const std::string svg = render_svg(model);
    CHECK(ascii.find("party 2") != std::string::npos);
    // one svg rect element per model rectangle plus the background
    std::size_t count = 0, pos = 0;
    while ((pos = svg.find("<rect", pos)) != std::string::npos) {
        ++count;
        pos += 5;
    }
    CHECK(count == model.rects.size() + 1);
    CHECK(svg.find("</svg>") != std::string::npos);

    // deterministic output
    CHECK(render_svg(model) == svg);
    CHECK(render_ascii(model) == ascii);
}

TEST_CASE("party bounds are checked") {
    CHECK_THROWS_AS(build_tile_model(build_e(2), 3), std::invalid_argument);
}

TEST_SUITE_END();
