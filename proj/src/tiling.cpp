#include "sqn/tiling.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

#include "sqn/structure.hpp"

namespace sqn {

TileModel build_tile_model(const StateSet& set, int party) {
    const int n = set.parties();
    if (party < 1 || party > n)
        throw std::invalid_argument("build_tile_model: party out of range");

    TileModel model;
    model.party = party;
    model.dims = set.dims;
    model.rows = set.dims[static_cast<std::size_t>(party - 1)];
    model.cols = 1;
    std::vector<int> x0;  // 0-based column parties, ascending
    for (int p = 0; p < n; ++p)
        if (p != party - 1) {
            x0.push_back(p);
            model.cols *= set.dims[static_cast<std::size_t>(p)];
        }

    const auto boxes = set_boxes(set);
    for (std::size_t b = 0; b < boxes.size(); ++b) {
        const auto& box = boxes[b];
        const auto& rows = box.sets[static_cast<std::size_t>(party - 1)];
        // label index sets are contiguous level ranges
        const int row0 = rows.front();
        const int row1 = rows.back() + 1;

        // flatten the column box row-major and split into contiguous runs
        std::vector<long long> cols;
        std::vector<std::size_t> pos(x0.size(), 0);
        while (true) {
            long long idx = 0;
            for (std::size_t k = 0; k < x0.size(); ++k)
                idx = idx * set.dims[static_cast<std::size_t>(x0[k])] +
                      box.sets[static_cast<std::size_t>(x0[k])][pos[k]];
            cols.push_back(idx);
            int k = static_cast<int>(x0.size()) - 1;
            while (k >= 0) {
                if (++pos[static_cast<std::size_t>(k)] <
                    box.sets[static_cast<std::size_t>(x0[static_cast<std::size_t>(k)])].size())
                    break;
                pos[static_cast<std::size_t>(k)] = 0;
                --k;
            }
            if (k < 0) break;
        }
        std::sort(cols.begin(), cols.end());
        std::size_t start = 0;
        for (std::size_t i = 1; i <= cols.size(); ++i) {
            if (i == cols.size() || cols[i] != cols[i - 1] + 1) {
                TileRect rect;
                rect.block = static_cast<int>(b);
                rect.cls = set.blocks[b].spec.cls;
                rect.q = set.blocks[b].spec.q;
                rect.row0 = row0;
                rect.row1 = row1;
                rect.col0 = cols[start];
                rect.col1 = cols[i - 1] + 1;
                model.rects.push_back(std::move(rect));
                start = i;
            }
        }
    }
    return model;
}

std::string render_ascii(const TileModel& model) {
    std::vector<std::string> grid(static_cast<std::size_t>(model.rows),
                                  std::string(static_cast<std::size_t>(model.cols), '.'));
    for (const auto& rect : model.rects) {
        const char base = rect.cls == BlockClass::C ? 'a' : 'A';
        const char ch = static_cast<char>(base + rect.block % 26);
        for (int r = rect.row0; r < rect.row1; ++r)
            for (long long c = rect.col0; c < rect.col1; ++c)
                grid[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)] = ch;
    }
    std::ostringstream os;
    os << "party " << model.party << " levels (rows) x remaining basis (cols, row-major)\n";
    for (const auto& line : grid) os << line << "\n";
    os << "legend:\n";
    int last = -1;
    for (const auto& rect : model.rects) {
        if (rect.block == last) continue;  // runs of the same block share a letter
        last = rect.block;
        const char base = rect.cls == BlockClass::C ? 'a' : 'A';
        os << "  " << static_cast<char>(base + rect.block % 26) << " = "
           << (rect.cls == BlockClass::C ? "C" : "D") << " q={";
        for (std::size_t i = 0; i < rect.q.size(); ++i) {
            if (i) os << ',';
            os << rect.q[i];
        }
        os << "}\n";
    }
    return os.str();
}

std::string render_svg(const TileModel& model) {
    const int cell = 18;
    const int margin = 4;
    const long long width = model.cols * cell + 2 * margin;
    const long long height = static_cast<long long>(model.rows) * cell + 2 * margin;

    std::ostringstream os;
    os << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" << width
       << "\" height=\"" << height << "\" viewBox=\"0 0 " << width << " " << height
       << "\">\n";
    os << "  <rect x=\"0\" y=\"0\" width=\"" << width << "\" height=\"" << height
       << "\" fill=\"white\"/>\n";
    for (const auto& rect : model.rects) {
        const int hue = (rect.block * 47) % 360;
        os << "  <rect x=\"" << margin + rect.col0 * cell << "\" y=\""
           << margin + rect.row0 * cell << "\" width=\"" << (rect.col1 - rect.col0) * cell
           << "\" height=\"" << (rect.row1 - rect.row0) * cell << "\" fill=\"hsl(" << hue
           << "," << (rect.cls == BlockClass::C ? 70 : 40) << "%,"
           << (rect.cls == BlockClass::C ? 75 : 55) << "%)\" stroke=\"black\" stroke-width=\"1\">";
        os << "<title>" << (rect.cls == BlockClass::C ? "C" : "D") << " q={";
        for (std::size_t i = 0; i < rect.q.size(); ++i) {
            if (i) os << ',';
            os << rect.q[i];
        }
        os << "}</title></rect>\n";
    }
    // grid lines over the cells
    for (int r = 0; r <= model.rows; ++r)
        os << "  <line x1=\"" << margin << "\" y1=\"" << margin + r * cell << "\" x2=\""
           << margin + model.cols * cell << "\" y2=\"" << margin + r * cell
           << "\" stroke=\"#888\" stroke-width=\"0.3\"/>\n";
    for (long long c = 0; c <= model.cols; ++c)
        os << "  <line x1=\"" << margin + c * cell << "\" y1=\"" << margin << "\" x2=\""
           << margin + c * cell << "\" y2=\"" << margin + model.rows * cell
           << "\" stroke=\"#888\" stroke-width=\"0.3\"/>\n";
    os << "</svg>\n";
    return os.str();
}

}  // namespace sqn
