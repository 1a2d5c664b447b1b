"""Walk through sentences whose truth depends on whether Q = L.

Every sentence is decided twice: once in the completion where the convex
subgroup L is everything, once where it is proper. Sentences that never
mention L come out the same both times.
"""
from threegroups import decide, parse

SENTENCES = [
    "QisL",
    "forall x. (Z(x) -> L(x))",
    "exists x. (x > 0 & not L(x))",
    "forall x. (not L(x) -> x > 1000 | x < -1000)",
    "forall x. exists y. (Z(y) & y <= x & x < y + 1)",
    "exists x. (Z(x) & 2*x = 3)",
]


def main() -> None:
    print(f"{'Q=L':>5} {'Q≠L':>5}  sentence")
    for text in SENTENCES:
        eq, ne = decide(parse(text))
        mark = "" if eq == ne else "   <- depends on Q=L"
        print(f"{str(eq):>5} {str(ne):>5}  {text}{mark}")


if __name__ == "__main__":
    main()
