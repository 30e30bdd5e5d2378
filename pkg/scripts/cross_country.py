"""Table 1 countries against constant-increment total-growth curves, 1960-2018.

For each country: initial level, observed total growth, the increment that
would produce it, and the growth it would have had on the A=600 curve.
"""
import sys

from inertia import growth_scatter, load_fixture, total_growth_factor

A_REF = 600.0


def main():
    points, _ = growth_scatter(load_fixture("table1"), 1960, 2018, [A_REF])
    print(f"{'country':8s} {'G(1960)':>8s} {'growth':>7s} {'A':>6s} {'on A=600':>9s}")
    for p in sorted(points, key=lambda p: -p.mean_increment):
        ref = total_growth_factor(p.initial_level, A_REF, 58)
        print(f"{p.country:8s} {p.initial_level:8.0f} {p.total_growth:7.3f} {p.mean_increment:6.0f} {ref:9.3f}")


if __name__ == "__main__":
    sys.exit(main())
