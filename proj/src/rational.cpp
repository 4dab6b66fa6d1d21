#include "orbitforge/rational.hpp"

#include <algorithm>
#include <set>

namespace orbitforge {

Rational parse_rational(const std::string& s) {
    if (s.empty()) throw ConfigError("empty rational");
    for (char c : s)
        if (!(std::isdigit((unsigned char)c) || c == '/' || c == '-' || c == '+'))
            throw ConfigError("rational must be 'p/q' with integer p, q: got '" + s + "'");
    try {
        Rational q(s);
        q.canonicalize();
        return q;
    } catch (const std::invalid_argument&) {
        throw ConfigError("unparseable rational '" + s + "'");
    }
}

std::string rational_str(const Rational& q) {
    return q.get_str();
}

GaussianRational operator*(const Rational& a, const GaussianRational& b) {
    return {a * b.re, a * b.im};
}

Integer GaussianRational::height() const {
    auto part = [](const Rational& q) {
        Integer n = abs(q.get_num());
        Integer d = abs(q.get_den());
        return std::max(n, d);
    };
    return std::max(part(re), part(im));
}

std::string GaussianRational::str() const {
    return re.get_str() + "," + im.get_str();
}

GaussianRational GaussianRational::parse(const std::string& s) {
    auto comma = s.find(',');
    if (comma == std::string::npos)
        return GaussianRational(parse_rational(s));
    return {parse_rational(s.substr(0, comma)), parse_rational(s.substr(comma + 1))};
}

const GaussianRational& AlgebraicEnumeration::element(size_t index) {
    if (index == 0) throw Error("enumeration is 1-based");
    while (cache_.size() < index) extend();
    return cache_[index - 1];
}

void AlgebraicEnumeration::extend() {
    if (cache_.empty()) {
        cache_.emplace_back(); // alpha_1 = 0
        return;
    }
    unsigned long H = next_height_++;
    // All reduced p/q with max(|p|,|q|) <= H per part, exact height == H overall.
    std::vector<Rational> parts;
    for (long p = -(long)H; p <= (long)H; ++p) {
        for (long q = 1; q <= (long)H; ++q) {
            Rational r(p, q);
            r.canonicalize();
            if (std::max(abs(r.get_num()), abs(r.get_den())) <= (long)H) parts.push_back(r);
        }
    }
    std::sort(parts.begin(), parts.end(), [](const Rational& a, const Rational& b) { return a < b; });
    parts.erase(std::unique(parts.begin(), parts.end()), parts.end());

    std::vector<GaussianRational> block;
    for (const Rational& a : parts)
        for (const Rational& b : parts) {
            GaussianRational g(a, b);
            if (g.height() == Integer((long)H) && !g.is_zero()) block.push_back(g);
        }
    std::sort(block.begin(), block.end());
    for (auto& g : block) cache_.push_back(std::move(g));
}

} // namespace orbitforge
