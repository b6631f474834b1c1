"""Degree sequences, recurrences and asymptotic degrees of the fixture maps."""
from valdyn import fixture_names, fixture_path, load_map
from valdyn.dynamics import degree_sequence, detect_recurrence
from valdyn.errors import ValdynError
from valdyn.numeric import format_real


def main():
    for name in fixture_names():
        F = load_map(fixture_path(name))
        degs = degree_sequence(F, 12).degrees
        try:
            rec = detect_recurrence(degs, 4)
            tail = f"lambda1={format_real(rec.dominant_root)} ({rec.formula()})"
        except ValdynError as err:
            tail = f"no recurrence: {err}"
        print(f"{name:8s} {' '.join(map(str, degs[:9]))} ...  {tail}")


if __name__ == "__main__":
    main()
