#include "dirspec/decompose.hpp"

#include <algorithm>

#include <json.hpp>

#include "dirspec/io.hpp"

namespace dirspec {

using json = nlohmann::ordered_json;

RatGrid uniform_spread(const Prime& p, const LineProfile& profile) {
    if (profile.sums.size() != static_cast<size_t>(p.value()))
        throw std::invalid_argument("profile length does not match p");
    RatGrid g{p};
    for (int y = 0; y < p.value(); ++y)
        for (int x = 0; x < p.value(); ++x)
            g.at(x, y) =
                profile.sums[static_cast<size_t>(line_index(p, profile.dir, {x, y}))] / p.value();
    return g;
}

PeelResult decompose_along(const RatGrid& f, const std::vector<Direction>& order) {
    const Prime& p = f.prime();
    PeelResult out{LineWeighting{p, order, {}, {}}, f};
    for (Direction d : order) {
        LineProfile prof = direction_profile(out.residual, d);
        std::vector<Rat>& w = out.weighting.weights[d];
        w.assign(static_cast<size_t>(p.value()), Rat(0));
        for (int c = 0; c < p.value(); ++c) w[static_cast<size_t>(c)] = prof.sums[static_cast<size_t>(c)] / p.value();
        out.residual -= uniform_spread(p, prof);
    }
    return out;
}

LineWeighting decompose(const RatGrid& f) {
    const Prime& p = f.prime();
    std::vector<Direction> order = special_directions(f);
    std::sort(order.begin(), order.end());
    if (order.empty()) {
        // Constant grid: no special direction. Spread onto vertical lines by
        // convention; each column already carries an equal share.
        order.push_back(Direction::vertical());
    }
    PeelResult res = decompose_along(f, order);
    if (!res.residual.is_zero()) {
        // Diagnose before failing: a residual with all line sums zero in all
        // p+1 directions must be pointwise zero, so report which stage of
        // that reasoning breaks.
        for (Direction d : all_directions(p)) {
            LineProfile prof = direction_profile(res.residual, d);
            for (int c = 0; c < p.value(); ++c)
                if (prof.sums[static_cast<size_t>(c)] != 0)
                    throw ResidualError("nonzero residual: line " + std::to_string(c) +
                                        " of direction " + to_string(d) + " sums to " +
                                        rat_to_string(prof.sums[static_cast<size_t>(c)]));
        }
        throw ResidualError("nonzero residual with all line sums zero");
    }
    return res.weighting;
}

RatGrid reconstruct(const LineWeighting& w) {
    RatGrid g{w.p};
    for (Direction d : w.order) {
        auto it = w.weights.find(d);
        if (it == w.weights.end()) continue;
        if (it->second.size() != static_cast<size_t>(w.p.value()))
            throw std::invalid_argument("weight vector length does not match p");
        for (int y = 0; y < w.p.value(); ++y)
            for (int x = 0; x < w.p.value(); ++x)
                g.at(x, y) += it->second[static_cast<size_t>(line_index(w.p, d, {x, y}))];
    }
    return g;
}

LineWeighting triangle_explicit_weights(Prime p) {
    LineWeighting w{p, {Direction::slope(0), Direction::slope(1), Direction::vertical()}, {}, {}};
    std::vector<Rat> horizontal, diagonal, vertical;
    for (int c = 0; c < p.value(); ++c) {
        vertical.push_back(rat(c, p.value()));    // x = c
        horizontal.push_back(rat(-c, p.value())); // y = c
        diagonal.push_back(rat(c, p.value()));    // y = x + c
    }
    w.weights[Direction::vertical()] = std::move(vertical);
    w.weights[Direction::slope(0)] = std::move(horizontal);
    w.weights[Direction::slope(1)] = std::move(diagonal);
    w.metadata["weights"] = "x=c: c/p; y=c: -c/p; y=x+c: c/p (as printed, no sign change needed)";
    w.metadata["region"] = "reconstructs the indicator of b<a; the printed description "
                           "names the region a<b and calls the slope-one lines vertical, "
                           "both corrected here";
    return w;
}

std::string write_weighting_json(const LineWeighting& w) {
    json jw = json::object();
    json order = json::array();
    for (Direction d : w.order) order.push_back(to_string(d));
    for (Direction d : w.order) {
        auto it = w.weights.find(d);
        if (it == w.weights.end()) continue;
        json per = json::object();
        for (int c = 0; c < w.p.value(); ++c)
            per[std::to_string(c)] = rat_to_string(it->second[static_cast<size_t>(c)]);
        jw[to_string(d)] = std::move(per);
    }
    json j{{"p", w.p.value()}, {"order", std::move(order)}, {"weights", std::move(jw)}};
    if (!w.metadata.empty()) {
        json meta = json::object();
        for (const auto& [k, v] : w.metadata) meta[k] = v;
        j["metadata"] = std::move(meta);
    }
    return j.dump(2) + "\n";
}

LineWeighting parse_weighting_json(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& e) {
        throw ParseError(std::string("bad JSON: ") + e.what());
    }
    if (!j.is_object() || !j.contains("p") || !j.contains("order") || !j.contains("weights"))
        throw ParseError("weighting JSON needs fields \"p\", \"order\", \"weights\"");
    Prime p = [&] {
        try {
            return Prime(j["p"].get<int>());
        } catch (const std::exception& e) {
            throw ParseError(std::string("bad \"p\": ") + e.what());
        }
    }();
    LineWeighting w{p, {}, {}, {}};
    for (const auto& d : j["order"]) w.order.push_back(parse_direction(p, d.get<std::string>()));
    for (Direction d : w.order) {
        std::string key = to_string(d);
        if (!j["weights"].contains(key))
            throw ParseError("weighting JSON is missing weights for " + key);
        std::vector<Rat> vals(static_cast<size_t>(p.value()), Rat(0));
        for (const auto& [ck, cv] : j["weights"][key].items()) {
            int c = std::stoi(ck);
            if (c < 0 || c >= p.value()) throw ParseError("line index out of range: " + ck);
            vals[static_cast<size_t>(c)] = rat_from_string(cv.get<std::string>());
        }
        w.weights[d] = std::move(vals);
    }
    if (j.contains("metadata"))
        for (const auto& [k, v] : j["metadata"].items()) w.metadata[k] = v.get<std::string>();
    return w;
}

}  // namespace dirspec
