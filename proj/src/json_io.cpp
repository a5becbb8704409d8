#include "lgm/json_io.hpp"

#include <fstream>
#include <map>

#include "lgm/errors.hpp"

namespace lgm {

namespace {

RepPtr shared_rep(const GroupSpec& spec)
{
    // loops read from one document share their representation object
    static std::map<std::pair<int, int>, RepPtr> cache;
    auto& slot = cache[{static_cast<int>(spec.family), spec.n}];
    if (!slot)
        slot = make_rep(spec);
    return slot;
}

void require(bool ok, const std::string& what)
{
    if (!ok)
        throw DomainError("malformed JSON: " + what);
}

} // namespace

json complex_to_json(cplx v) { return json::array({v.real(), v.imag()}); }

cplx complex_from_json(const json& j)
{
    if (j.is_number())
        return j.get<double>();
    require(j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number(),
            "complex numbers are [re, im]");
    return {j[0].get<double>(), j[1].get<double>()};
}

json tensor_to_json(const Tensor& t)
{
    json entries = json::array();
    const auto& shape = t.shape();
    std::vector<std::size_t> idx(shape.size(), 0);
    const auto data = t.data();
    for (std::size_t k = 0; k < data.size(); ++k) {
        if (std::abs(data[k]) >= 1e-14)
            entries.push_back({{"idx", idx}, {"re", data[k].real()}, {"im", data[k].imag()}});
        for (std::size_t a = shape.size(); a-- > 0;) {
            if (++idx[a] < shape[a])
                break;
            idx[a] = 0;
        }
    }
    return {{"shape", shape}, {"entries", entries}};
}

Tensor tensor_from_json(const json& j)
{
    require(j.is_object() && j.contains("shape") && j.contains("entries"), "tensor needs shape and entries");
    const auto shape = j.at("shape").get<std::vector<std::size_t>>();
    Tensor t(shape);
    for (const auto& e : j.at("entries")) {
        const auto idx = e.at("idx").get<std::vector<std::size_t>>();
        if (idx.size() != shape.size())
            throw ShapeError("tensor entry index has " + std::to_string(idx.size()) + " axes, shape has " +
                             std::to_string(shape.size()));
        t.at(idx) = cplx{e.value("re", 0.0), e.value("im", 0.0)};
    }
    return t;
}

json matrix_to_json(const Matrix& m)
{
    json rows = json::array();
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        json row = json::array();
        for (Eigen::Index k = 0; k < m.cols(); ++k)
            row.push_back(complex_to_json(m(i, k)));
        rows.push_back(row);
    }
    return rows;
}

Matrix matrix_from_json(const json& j)
{
    require(j.is_array() && !j.empty() && j[0].is_array(), "matrix must be a list of rows");
    const auto r = static_cast<Eigen::Index>(j.size());
    const auto c = static_cast<Eigen::Index>(j[0].size());
    Matrix m(r, c);
    for (Eigen::Index i = 0; i < r; ++i) {
        const auto& row = j[static_cast<std::size_t>(i)];
        if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != c)
            throw ShapeError("matrix rows differ in length");
        for (Eigen::Index k = 0; k < c; ++k)
            m(i, k) = complex_from_json(row[static_cast<std::size_t>(k)]);
    }
    return m;
}

json group_spec_to_json(const GroupSpec& s) { return {{"family", family_key(s.family)}, {"n", s.n}}; }

GroupSpec group_spec_from_json(const json& j)
{
    require(j.is_object() && j.contains("family"), "rep needs a family");
    GroupSpec s;
    s.family = parse_family(j.at("family").get<std::string>());
    s.n = j.value("n", s.family == Family::G2 ? 7 : 1);
    s.validate();
    return s;
}

json loop_to_json(const WilsonLoop& w)
{
    json factors = json::array();
    for (const auto& f : w.factors())
        factors.push_back({{"coeff", matrix_to_json(f.coeff)}, {"sign", f.sign}});
    return {{"rep", group_spec_to_json(w.rep()->spec)},
            {"scale", complex_to_json(w.scale())},
            {"factors", factors}};
}

WilsonLoop loop_from_json(const json& j)
{
    require(j.is_object() && j.contains("rep") && j.contains("factors"), "loop needs rep and factors");
    const auto rep = shared_rep(group_spec_from_json(j.at("rep")));
    std::vector<LoopFactor> factors;
    for (const auto& f : j.at("factors")) {
        require(f.contains("coeff"), "loop factor needs coeff");
        factors.push_back({matrix_from_json(f.at("coeff")), f.value("sign", 1)});
    }
    require(!factors.empty(), "loop needs at least one factor");
    const cplx scale = j.contains("scale") ? complex_from_json(j.at("scale")) : cplx(1.0);
    return WilsonLoop(rep, std::move(factors), scale);
}

std::vector<WilsonLoop> loop_product_from_json(const json& j)
{
    const json& list = j.is_object() && j.contains("loops") ? j.at("loops") : j;
    std::vector<WilsonLoop> out;
    if (list.is_object()) {
        out.push_back(loop_from_json(list));
    } else {
        require(list.is_array() && !list.empty(), "expected a loop or a nonempty list of loops");
        for (const auto& e : list)
            out.push_back(loop_from_json(e));
    }
    return out;
}

json loop_sum_to_json(const LoopSum& s)
{
    json out = json::array();
    for (const auto& t : s.terms()) {
        if (t.coeff == 1.0 && t.loops.size() == 1) {
            out.push_back(loop_to_json(t.loops.front()));
            continue;
        }
        json pair = json::array();
        for (const auto& w : t.loops)
            pair.push_back(loop_to_json(w));
        out.push_back({{"pair", pair}, {"coeff", complex_to_json(t.coeff)}});
    }
    return out;
}

LoopSum loop_sum_from_json(const json& j)
{
    require(j.is_array(), "loop sum must be a list of terms");
    LoopSum s;
    for (const auto& e : j) {
        if (e.is_object() && e.contains("pair")) {
            std::vector<WilsonLoop> loops;
            for (const auto& w : e.at("pair"))
                loops.push_back(loop_from_json(w));
            require(!loops.empty(), "pair needs at least one loop");
            s.add(e.contains("coeff") ? complex_from_json(e.at("coeff")) : cplx(1.0), std::move(loops));
        } else {
            s.add(1.0, {loop_from_json(e)});
        }
    }
    return s;
}

json spectrum_to_json(const std::vector<SpectrumEntry>& s)
{
    json out = json::array();
    for (const auto& e : s)
        out.push_back({{"value", e.value}, {"multiplicity", e.multiplicity}});
    return out;
}

json read_json_file(const std::string& path)
{
    std::ifstream in(path);
    if (!in)
        throw DomainError("cannot open '" + path + "'");
    try {
        return json::parse(in);
    } catch (const json::exception& e) {
        throw DomainError("cannot parse '" + path + "': " + e.what());
    }
}

} // namespace lgm
