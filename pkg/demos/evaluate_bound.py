"""Evaluate the achievable-rate bound for a fixture network and scheme.

Walks through the per-cut breakdown: for each destination and each nested
pair of relay subsets S subset-of T, the four information terms and their
combination, then the overall minimum and the feasibility margins.
"""

from pathlib import Path

from nncpdf import load_network_file, load_scheme_file, nncpdf_bound

FIXTURES = Path(__file__).resolve().parent.parent / "tests" / "fixtures"


def main():
    net = load_network_file(FIXTURES / "n3_binary.network.json")
    scheme = load_scheme_file(FIXTURES / "n3_binary.scheme.json", net.N)

    report = nncpdf_bound(net, scheme)
    print(f"network: N={net.N}, destinations={sorted(net.destinations)}")
    print()
    print(f"{'d':>2} {'S':>6} {'T':>6} {'term1':>9} {'term2':>9} "
          f"{'term3':>9} {'term4':>9} {'value':>9}")
    for rec in report.cuts:
        c = rec.cut
        s = ",".join(map(str, sorted(c.S))) or "-"
        t = ",".join(map(str, sorted(c.T))) or "-"
        t1, t2, t3, t4 = rec.terms
        print(f"{c.d:>2} {s:>6} {t:>6} {t1:>9.5f} {t2:>9.5f} "
              f"{t3:>9.5f} {t4:>9.5f} {rec.total:>9.5f}")
    print()
    for d, v in sorted(report.per_destination.items()):
        print(f"destination {d}: min over cuts = {v:.6f}")
    print(f"bound: {report.bound:.6f}")
    print(f"feasible: {report.feasible}")
    for entry in report.feasibility:
        nodes = ",".join(map(str, sorted(entry.nodes)))
        print(f"  covering margin for {{{nodes}}}: {entry.margin:+.6f}")


if __name__ == "__main__":
    main()
