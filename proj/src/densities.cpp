#include "contactk/densities.hpp"

namespace ck {

Density act_density(const ContactField& x, const Density& d) {
    if (x.n != d.arity()) throw error("arity mismatch in density action");
    return {density_action_op(x.gen, d.weight).apply(d.coeff), d.weight};
}

SplitDensity split_phi(const Density& d) {
    auto [f1, f2] = split_theta_n(d.coeff);
    Rat half(1, 2);
    return {{f1, d.weight}, {f2, d.weight + half}};
}

Density unsplit_phi(const SplitDensity& s) {
    Rat half(1, 2);
    if (s.pi_part.weight != s.even_part.weight + half) throw error("split weights must differ by 1/2");
    return {join_theta_n(s.even_part.coeff, s.pi_part.coeff), s.even_part.weight};
}

Density parse_density(const std::string& text, int n) {
    auto at = text.find('@');
    if (at == std::string::npos) throw parse_error("expected 'poly @ weight'", text.size());
    std::string ws = text.substr(at + 1);
    std::size_t b = ws.find_first_not_of(" \t");
    std::size_t e = ws.find_last_not_of(" \t");
    if (b == std::string::npos) throw parse_error("missing weight", at + 1);
    auto w = parse_rat(ws.substr(b, e - b + 1));
    if (!w) throw parse_error("bad weight", at + 1);
    return {parse_poly(text.substr(0, at), n), *w};
}

std::string format_density(const Density& d) {
    return format_poly(d.coeff) + " @ " + rat_str(d.weight);
}

} // namespace ck
