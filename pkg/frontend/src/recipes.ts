/**
 * Figure recipes: which columns of each scenario CSV are drawn, on which
 * scales, with which reference annotations. Recipes never compute
 * physics; annotation values are literals or read from the scenario's
 * meta.json.
 */

import type { Scale } from "./svg.js";

export interface SeriesSpec {
  column: string;
  label: string;
  color: string;
}

export interface MarkerSpec {
  axis: "x" | "y";

  /** literal value, or a key looked up in <scenario>.meta.json */
  value?: number;
  metaKey?: string;
  label: string;
}

export interface FigureRecipe {
  id: string;
  title: string;
  xColumn: string;
  xScale: Scale;
  yScale: Scale;
  yLabel: string;
  series: SeriesSpec[];
  markers: MarkerSpec[];
}

const BLUE = "#1f77b4";
const BLACK = "#111111";
const RED = "#d62728";
const GRAY = "#7f7f7f";

export const RECIPES: Record<string, FigureRecipe> = {
  fig2b: {
    id: "fig2b",
    title: "Mean ionization probability vs mean intensity",
    xColumn: "mean_intensity_wcm2",
    xScale: "log",
    yScale: "log",
    yLabel: "ionization probability",
    series: [
      { column: "sfi_coherent", label: "SFI coherent", color: BLUE },
      { column: "mpi_coherent", label: "MPI coherent", color: "#76aad4" },
      { column: "sfi_bsv", label: "SFI squeezed", color: BLACK },
      { column: "mpi_bsv", label: "MPI squeezed", color: GRAY },
    ],
    markers: [],
  },
  fig2c: {
    id: "fig2c",
    title: "15th-harmonic yield vs mean intensity",
    xColumn: "mean_intensity_wcm2",
    xScale: "log",
    yScale: "log",
    yLabel: "N15 (arb)",
    series: [
      { column: "n15_coherent", label: "coherent", color: BLUE },
      { column: "n15_bsv", label: "squeezed", color: BLACK },
    ],
    markers: [{ axis: "x", value: 1.5e14, label: "I_sat" }],
  },
  fig2d: {
    id: "fig2d",
    title: "Single-atom harmonic power spectra",
    xColumn: "harmonic_order",
    xScale: "linear",
    yScale: "log",
    yLabel: "spectral power (arb)",
    series: [
      { column: "power_coherent", label: "coherent", color: BLUE },
      { column: "power_bsv", label: "squeezed", color: BLACK },
    ],
    markers: [],
  },
  fig3a: {
    id: "fig3a",
    title: "Coherence and absorption lengths vs intensity",
    xColumn: "intensity_wcm2",
    xScale: "log",
    yScale: "log",
    yLabel: "length (cm)",
    series: [
      { column: "coherence_length_cm", label: "L_c", color: "#2ca02c" },
      { column: "absorption_length_cm", label: "L_a", color: RED },
    ],
    markers: [],
  },
  fig3b: {
    id: "fig3b",
    title: "Propagated 15th-harmonic yield vs intensity",
    xColumn: "intensity_wcm2",
    xScale: "log",
    yScale: "log",
    yLabel: "N15 after medium (arb)",
    series: [
      { column: "n15_propagated", label: "per-intensity", color: BLACK },
    ],
    markers: [],
  },
  fig3c: {
    id: "fig3c",
    title: "Mean 15th-harmonic yield vs medium length",
    xColumn: "medium_length_cm",
    xScale: "linear",
    yScale: "log",
    yLabel: "N15 (arb)",
    series: [
      { column: "n15_coherent", label: "coherent", color: BLUE },
      { column: "n15_bsv", label: "squeezed", color: BLACK },
    ],
    markers: [
      { axis: "x", metaKey: "marker_5_2_la_cm", label: "(5/2) L_a" },
    ],
  },
  fig4b: {
    id: "fig4b",
    title: "Heisenberg excess vs photon losses",
    xColumn: "absorbed_fraction",
    xScale: "linear",
    yScale: "linear",
    yLabel: "var(X1) var(X2) - 1",
    series: [
      { column: "heisenberg_excess", label: "excess", color: BLACK },
    ],
    markers: [{ axis: "x", value: 0.125, label: "A = 1/8" }],
  },
  fig4c: {
    id: "fig4c",
    title: "Coherent/squeezed yield ratio vs gas density",
    xColumn: "atomic_density_cm3",
    xScale: "log",
    yScale: "log",
    yLabel: "ratio",
    series: [
      { column: "ratio_coh_over_bsv", label: "ratio", color: BLACK },
    ],
    markers: [{ axis: "y", value: 100.0, label: "10^2" }],
  },
  fig4d: {
    id: "fig4d",
    title: "Harmonic spectra after propagation",
    xColumn: "harmonic_order",
    xScale: "linear",
    yScale: "log",
    yLabel: "spectral power (arb)",
    series: [
      { column: "power_coherent", label: "coherent", color: BLUE },
      { column: "power_bsv", label: "squeezed", color: BLACK },
    ],
    markers: [],
  },
};

export function figureIds(): string[] {
  return Object.keys(RECIPES);
}
