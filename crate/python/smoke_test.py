"""Smoke test for the cloning_machines extension. Run after installing the wheel."""

import math

import cloning_machines as cm


def close(a, b, tol=1e-9):
    return abs(a - b) < tol


def main():
    ucm = cm.DoubleBellAmplitudes.ucm()
    chans = ucm.output_channels()
    assert close(chans[0][1], 1 / 12) and close(chans[1][1], 1 / 12), chans
    assert close(ucm.repartition("rb_ac").repartition("rb_ac").to_list()[0], ucm.to_list()[0])

    trip = cm.DoubleBellAmplitudes.triplicator(1 / math.sqrt(6))
    for ch in trip.output_channels():
        assert close(ch[1], 1 / 6, 1e-8) and close(ch[2], 1 / 6, 1e-8), ch

    rep = ucm.robertson_check(1)
    assert rep["satisfied"], rep

    front = cm.frontier(2, 3)
    # a^2 + b^2 + 2ab/N = 1 along the frontier
    assert all(close(p["a"] ** 2 + p["b"] ** 2 + p["a"] * p["b"], 1.0) for p in front), front
    sym = cm.symmetric_point(5)
    assert close(sym["pi_a"], 5 / 12), sym

    g = cm.AmplitudeGrid.random(4, 7)
    dd = g.fourier_dual().fourier_dual()
    assert max(abs(a - b) for a, b in zip(dd.amplitudes(), g.amplitudes())) < 1e-12
    assert g.entropic_check()["satisfied"]

    psi = cm.me_state(0, 0, 3)
    assert close(sum(abs(c) ** 2 for c in psi), 1.0)

    cap = cm.capacity_upper_bound(0.0, 0.0, 0.0)
    assert cap["region"] == "interior" and close(cap["bound"], 1.0)

    try:
        cm.AmplitudeGrid(2, [2, 0, 0, 0])
    except ValueError:
        pass
    else:
        raise AssertionError("unnormalized grid accepted")

    report = cm.verify(dim=3, samples=20, seed=cm.DEFAULT_SEED)
    assert report["all_passed"], report
    print("smoke test ok")


if __name__ == "__main__":
    main()
