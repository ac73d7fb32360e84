#include <iostream>

#include <rdmap/rdmap.hpp>

// Tour of the library: build a channel, test the three conditions against a
// destroyer map, and evaluate the induced monotone.

int main() {
    using namespace rdmap;

    // A qubit readout in the +/- basis: measures coherently, reprepares
    // incoherently.
    const KrausChannel readout = xbasis_readout();
    const Destroyer pi = dephasing_destroyer(2);

    const ClassificationReport rep = classify(readout, pi);
    std::cout << "channel: " << rep.channel << "\n";
    for (const auto& [name, r] : rep.conditions)
        std::cout << "  " << name << ": " << verdict_name(r.verdict)
                  << "  (residual " << r.max_residual << ")\n";
    for (const auto& [name, r] : rep.selective)
        std::cout << "  " << name << ": " << verdict_name(r.verdict) << "\n";

    // The commuting condition fails on the |+> state; quantify how much
    // coherence that state carries.
    const double s = std::sqrt(0.5);
    const DensityMatrix plus = pure_state(ket({cplx{s, 0}, cplx{s, 0}}));
    std::cout << "coherence of |+> (relative entropy): "
              << dtilde(plus, pi, relative_entropy_measure()) << " bits\n";

    // A two-qubit example: how far is the maximally entangled state from
    // its closest classically-correlated projection?
    const DensityMatrix bell =
        pure_state(ket({cplx{s, 0}, 0, 0, cplx{s, 0}}), BipartiteDims{2, 2});
    std::cout << "diagonal discord of the Bell state: " << diagonal_discord(bell)
              << " bits\n";
    return 0;
}
