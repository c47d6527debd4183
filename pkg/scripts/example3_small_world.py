"""Match three moments of a small-world graph (n=40, k=2, p=3/40)."""

from _common import parser, run_and_dump

from specnet.generators import erdos_renyi_connected, watts_strogatz
from specnet.spectra import graph_moments

if __name__ == "__main__":
    args = parser(__doc__, "example3").parse_args()
    target = watts_strogatz(40, 2, 3 / 40, seed=args.seed)
    print("target moments:", graph_moments(target, 3).round(3).tolist())
    m1 = graph_moments(target, 1)[0]
    g0 = erdos_renyi_connected(40, m1 / 39, args.seed)
    # radius 2 views: with radius 1 no nonedge lies inside a ball, so nothing can be added
    run_and_dump("small_world", g0, target, args.out, r=2, order=3, seed=args.seed)
