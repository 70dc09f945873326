"""Headline numbers of the double-prism microwave experiment at 9.15 GHz."""

import math

from evanesim.conventions import SPEED_OF_LIGHT
from evanesim.pulse import PulseSpec, channel_grid, propagate, synthesize
from evanesim.scenarios import DoublePrismSpec, double_prism, goos_haenchen_shift
from evanesim.timing import hartman_scan, saturation_lengths, universal_ratio
from evanesim.virtuality import uncertainty_report
from evanesim.xfermat import scatter_spectrum


def main():
    spec = DoublePrismSpec()
    kappa = complex(spec.gap_kz()).imag
    lam = spec.wavelength
    print(f"wavelength            {lam * 1e3:.2f} mm")
    print(f"critical angle        {math.degrees(spec.critical_angle):.3f} deg")
    print(f"gap decay constant    {kappa:.3f} 1/m  (1/kappa = {1e3 / kappa:.3f} mm)")

    curve = hartman_scan(lambda d: double_prism(spec.with_gap(d)), spec.omega0, saturation_lengths(kappa))
    tau = curve.tau_asymptotic
    print(f"saturated delay       {tau * 1e12:.2f} ps  (tau*f0 = {universal_ratio(tau, spec.center_frequency):.4f})")

    for pol in ("TM", "TE"):
        d = goos_haenchen_shift(DoublePrismSpec(polarization=pol))
        print(f"GH shift {pol}           {d * 1e3:.2f} mm = {d / lam:.4f} lambda")
    gh = goos_haenchen_shift(spec)
    print(f"GH delay D n sin/c    {gh * spec.prism_index * math.sin(spec.incidence_angle) / SPEED_OF_LIGHT * 1e12:.2f} ps")

    pulse = synthesize(PulseSpec(envelope_duration=2e-9, record_length=48e-9))
    trace = propagate(pulse, scatter_spectrum(double_prism(spec), channel_grid(pulse)))
    a = trace.arrival
    print(f"pulse bandwidth       {pulse.spec.fractional_bandwidth * 100:.2f} %")
    for name in ("reflected", "transmitted"):
        s = a[name].shifted(a["incident"])
        print(f"{name:<12} delay    peak {s.peak * 1e12:7.2f} ps  centroid {s.centroid * 1e12:7.2f} ps  "
              f"front {s.half_max_front * 1e12:7.2f} ps")
    print(f"|peak_t - peak_r|     {abs(a['transmitted'].peak - a['reflected'].peak) * 1e12:.2f} ps")

    rep = uncertainty_report(spec)
    print(f"delta_n               {rep.delta_n:.5f}  (raised gap mode: {rep.raised_classification.value})")


if __name__ == "__main__":
    main()
