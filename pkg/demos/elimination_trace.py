"""Eliminate a quantifier and check the result pointwise in both models."""
import random

from threegroups import LEX, STD, eval_qf, parse
from threegroups.gen import random_assignment
from threegroups.qe import qe, record_cases
from threegroups.syntax import to_text

FORMULA = "exists x. (Z(x) & y < x & x < z & x ~ 1 mod 3)"


def main() -> None:
    f = parse(FORMULA)
    with record_cases() as hits:
        r = qe(f)
    print("input: ", FORMULA)
    print("output:", to_text(r))
    print("elimination cases used:", ", ".join(sorted(hits)) or "none")

    rng = random.Random(1)
    for model in (STD, LEX):
        print(f"\n{model.tag}:")
        for _ in range(4):
            a = random_assignment(rng, model, ["y", "z"], span=6)
            shown = ", ".join(f"{k}={v}" for k, v in a.items())
            print(f"  {shown:<40} qe says {eval_qf(model, r, a)}")


if __name__ == "__main__":
    main()
