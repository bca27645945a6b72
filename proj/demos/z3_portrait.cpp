// Renders the Z3-symmetric field -e^{z^3}/(3z^2) and prints what was found.
#include <iostream>

#include <essfield/essfield.hpp>

using namespace essfield;

int main(int argc, char** argv) {
    std::string out = argc > 1 ? argv[1] : "z3_portrait.svg";
    auto x = field_from_roots(-1.0 / 3.0, {}, {{0.0, 2}}, 1.0, {{0.0, 3}});

    auto iso = isotropy_group(x);
    std::cout << "isotropy order " << iso.order << " about " << *iso.center << "\n";

    auto q = quotient_field(x);
    std::cout << "quotient lambda " << q.field.lambda << ", E degree " << q.field.E.degree() << "\n";

    PortraitConfig cfg;
    cfg.chart = AffineWindow{0.0, 2.0};
    cfg.nx = cfg.ny = 14;
    write_image(render(x, cfg), out);
    std::cout << "wrote " << out << "\n";
}
