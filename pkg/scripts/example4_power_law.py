"""Match five moments of a preferential-attachment graph (n=50, m=4)."""

from _common import parser, run_and_dump

from specnet.generators import barabasi_albert, erdos_renyi_connected
from specnet.spectra import graph_moments

if __name__ == "__main__":
    args = parser(__doc__, "example4").parse_args()
    target = barabasi_albert(50, 4, seed=args.seed)
    print("target moments:", [f"{x:.3g}" for x in graph_moments(target, 5)])
    m1 = graph_moments(target, 1)[0]
    g0 = erdos_renyi_connected(50, m1 / 49, args.seed)
    res = run_and_dump("power_law", g0, target, args.out, r=2, seed=args.seed)
    print("  target degrees:  ", sorted(target.degrees(), reverse=True)[:10], "...")
    print("  designed degrees:", sorted(res.graph.degrees(), reverse=True)[:10], "...")
