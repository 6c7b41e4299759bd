#include "contactk/contact.hpp"

namespace ck {

SuperPoly contact_bracket(const SuperPoly& f, const SuperPoly& g) {
    if (f.arity() != g.arity()) throw error("arity mismatch in contact bracket");
    int n = f.arity();
    SuperPoly r = f * g.dx() - f.dx() * g;
    Rat half(1, 2);
    Rat s = f.parity_bit() ? half : Rat(-half); // -1/2 (-1)^{|F|}
    for (int i = 1; i <= n; ++i) r += s * (f.eta(i) * g.eta(i));
    return r;
}

DiffOp vector_field_of(const ContactField& x) {
    return density_action_op(x.gen, 0);
}

ContactField bracket_as_fields(const ContactField& x, const ContactField& y) {
    return {x.n, contact_bracket(x.gen, y.gen)};
}

std::vector<ContactField> generators(int n, int dmax) {
    std::vector<ContactField> out;
    Mask full = (Mask{1} << n) - 1;
    for (int m = 0; m <= dmax; ++m)
        for (Mask s = 0; s <= full; ++s) {
            if (n >= 2 && s == full) continue;
            out.emplace_back(n, SuperPoly::mono(n, {m, s}));
        }
    return out;
}

std::vector<ContactField> monomial_fields(int n, int dmax) {
    std::vector<ContactField> out;
    Mask full = (Mask{1} << n) - 1;
    for (int m = 0; m <= dmax; ++m)
        for (Mask s = 0; s <= full; ++s) out.emplace_back(n, SuperPoly::mono(n, {m, s}));
    return out;
}

} // namespace ck
