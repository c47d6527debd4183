"""Star(10) and two-star(20) targets from random connected starting graphs."""

from _common import parser, run_and_dump

from specnet.generators import erdos_renyi_connected, star, two_star

if __name__ == "__main__":
    args = parser(__doc__, "example1").parse_args()
    res = run_and_dump("star", erdos_renyi_connected(10, 0.3, args.seed), star(10), args.out,
                       seed=args.seed)
    print("  final degrees:", sorted(res.graph.degrees(), reverse=True))
    run_and_dump("two_star", erdos_renyi_connected(20, 0.6, args.seed), two_star(20), args.out,
                 seed=args.seed)
