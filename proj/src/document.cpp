#include "sqn/document.hpp"

#include <cstdio>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

namespace sqn {

namespace {

const char* label_name(PartyLabel l) {
    switch (l) {
        case PartyLabel::Zero: return "zero";
        case PartyLabel::Top: return "top";
        case PartyLabel::AlphaSpread: return "alpha";
        case PartyLabel::BetaSpread: return "beta";
    }
    return "?";
}

PartyLabel label_from_name(const std::string& s) {
    if (s == "zero") return PartyLabel::Zero;
    if (s == "top") return PartyLabel::Top;
    if (s == "alpha") return PartyLabel::AlphaSpread;
    if (s == "beta") return PartyLabel::BetaSpread;
    throw std::runtime_error("document: unknown label '" + s + "'");
}

Family family_from_name(const std::string& s) {
    if (s == "E") return Family::E;
    if (s == "O") return Family::O;
    if (s == "F") return Family::F;
    if (s == "derived") return Family::Derived;
    throw std::runtime_error("document: unknown family '" + s + "'");
}

std::string fmt_number(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

void write_int_list(std::ostringstream& os, const std::vector<int>& v) {
    os << '[';
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) os << ',';
        os << v[i];
    }
    os << ']';
}

}  // namespace

StateSetDocument document_from_set(const StateSet& set, bool with_amplitudes) {
    StateSetDocument doc;
    doc.set = set;
    canonicalize(doc.set);
    if (with_amplitudes) doc.states = expand_set(doc.set);
    return doc;
}

std::string serialize_document(const StateSetDocument& doc) {
    std::ostringstream os;
    os << "{\n";
    os << "  \"schema\": \"" << doc.schema << "\",\n";
    os << "  \"family\": \"" << family_name(doc.set.family) << "\",\n";
    os << "  \"name\": \"" << doc.set.name << "\",\n";
    os << "  \"dims\": ";
    write_int_list(os, doc.set.dims);
    os << ",\n  \"blocks\": [\n";
    for (std::size_t b = 0; b < doc.set.blocks.size(); ++b) {
        const auto& block = doc.set.blocks[b];
        os << "    {\"class\": \"" << (block.spec.cls == BlockClass::C ? "C" : "D")
           << "\", \"q\": ";
        write_int_list(os, block.spec.q);
        os << ", \"labels\": [";
        for (std::size_t t = 0; t < block.labels.size(); ++t) {
            if (t) os << ',';
            os << '"' << label_name(block.labels[t]) << '"';
        }
        os << "]}" << (b + 1 < doc.set.blocks.size() ? "," : "") << "\n";
    }
    os << "  ]";
    if (doc.states) {
        os << ",\n  \"states\": [\n";
        for (std::size_t s = 0; s < doc.states->size(); ++s) {
            const auto& st = (*doc.states)[s];
            os << "    {\"block\": " << (st.origin ? st.origin->block : -1) << ", \"tuple\": ";
            write_int_list(os, st.origin ? st.origin->tuple : std::vector<int>{});
            os << ", \"factors\": [";
            for (std::size_t t = 0; t < st.factors.size(); ++t) {
                if (t) os << ',';
                os << '[';
                const auto& f = st.factors[t];
                for (int k = 0; k < f.dim; ++k) {
                    if (k) os << ',';
                    os << '[' << fmt_number(f.amps[static_cast<std::size_t>(k)].real()) << ','
                       << fmt_number(f.amps[static_cast<std::size_t>(k)].imag()) << ']';
                }
                os << ']';
            }
            os << "]}" << (s + 1 < doc.states->size() ? "," : "") << "\n";
        }
        os << "  ]";
    }
    os << "\n}\n";
    return os.str();
}

StateSetDocument parse_document(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw std::runtime_error(std::string("document: parse error: ") + e.what());
    }
    StateSetDocument doc;
    try {
        doc.schema = j.at("schema").get<std::string>();
        if (doc.schema != "sqn/1")
            throw std::runtime_error("document: unsupported schema '" + doc.schema + "'");
        doc.set.family = family_from_name(j.at("family").get<std::string>());
        doc.set.name = j.at("name").get<std::string>();
        doc.set.dims = j.at("dims").get<std::vector<int>>();
        const int n = static_cast<int>(doc.set.dims.size());
        for (const auto& jb : j.at("blocks")) {
            SymbolicBlock block;
            const std::string cls = jb.at("class").get<std::string>();
            if (cls != "C" && cls != "D")
                throw std::runtime_error("document: unknown class '" + cls + "'");
            block.spec.cls = cls == "C" ? BlockClass::C : BlockClass::D;
            block.spec.q = jb.at("q").get<std::vector<int>>();
            for (const auto& jl : jb.at("labels"))
                block.labels.push_back(label_from_name(jl.get<std::string>()));
            if (block.parties() != n)
                throw std::runtime_error("document: block label count does not match dims");
            for (int p = 1; p <= n; ++p)
                if (block.spec.contains(p) != is_spread(block.labels[static_cast<std::size_t>(p - 1)]))
                    throw std::runtime_error("document: q inconsistent with spread labels");
            doc.set.blocks.push_back(std::move(block));
        }
        if (j.contains("states")) {
            std::vector<ProductState> states;
            for (const auto& js : j.at("states")) {
                ProductState st;
                ProductState::Origin origin;
                origin.block = js.at("block").get<int>();
                origin.tuple = js.at("tuple").get<std::vector<int>>();
                st.origin = std::move(origin);
                int t = 0;
                for (const auto& jf : js.at("factors")) {
                    LocalVector f;
                    f.dim = doc.set.dims[static_cast<std::size_t>(t++)];
                    for (const auto& ja : jf)
                        f.amps.emplace_back(ja.at(0).get<double>(), ja.at(1).get<double>());
                    if (static_cast<int>(f.amps.size()) != f.dim)
                        throw std::runtime_error("document: factor length does not match dims");
                    st.factors.push_back(std::move(f));
                }
                if (st.parties() != n)
                    throw std::runtime_error("document: state factor count does not match dims");
                states.push_back(std::move(st));
            }
            doc.states = std::move(states);
        }
    } catch (const nlohmann::json::exception& e) {
        throw std::runtime_error(std::string("document: missing or mistyped field: ") + e.what());
    }
    return doc;
}

std::vector<ProductState> document_states(const StateSetDocument& doc) {
    if (doc.states) return *doc.states;
    return expand_set(doc.set);
}

}  // namespace sqn
