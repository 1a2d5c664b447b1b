"""Least witnesses for one-variable systems, compared with a brute-force grid."""
import random

from threegroups import find_witness, parse
from threegroups.gen import random_witness_instance
from threegroups.witness import build_candidates, constraints_from_formula, grid_search, to_formula
from threegroups.syntax import to_text


def main() -> None:
    _, cs = constraints_from_formula(parse("2*frac(x) > 1 & floor(x) >= 3 & floor(x) ~ 1 mod 2"))
    c = build_candidates(cs)
    print("candidate fractional parts:", [str(v) for v in sorted(c.midpoints + c.V)])
    print("candidate integer parts:   ", [str(v) for v in c.floors])
    print("least witness:", find_witness(cs))

    rng = random.Random(3)
    print("\nrandom systems:")
    for _ in range(5):
        cs = random_witness_instance(rng, max_constraints=3)
        w, g = find_witness(cs), grid_search(cs)
        # the grid only confirms satisfiability; with no lower bound its points can lie below the candidates
        print(f"  {to_text(to_formula(cs))}\n    witness {w}, grid satisfiable: {g is not None}")


if __name__ == "__main__":
    main()
