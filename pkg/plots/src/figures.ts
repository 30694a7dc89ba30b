/**
 * Figure builders: map logged columns onto the six figure kinds.
 *
 * Nothing here re-runs any physics. Every plotted series is either a logged
 * column or, for the tracking references, the exact difference of two logged
 * columns (the log defines each error as state minus reference, so the
 * reference is recovered by subtraction alone).
 */

import { ColumnName, RunTable, SchemaError, col } from "./csv";
import { RunSummary, summaryNumber } from "./summary";
import { BarGroup, Panel, renderBarGroups, renderPanels } from "./svg";

export const FIGURE_KINDS = ["tracking", "errors", "controls", "gains", "weights", "metrics"] as const;
export type FigureKind = (typeof FIGURE_KINDS)[number];

export type RunInput =
  | { type: "csv"; table: RunTable }
  | { type: "summary"; summary: RunSummary };

const C = ["#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd", "#8c564b"];
const REF = "#555555";

function tracking(table: RunTable): Panel[] {
  const t = col(table, "t");
  const axes: Array<[ColumnName, ColumnName, string]> = [
    ["phi", "e_phi", "roll φ"],
    ["theta", "e_theta", "pitch θ"],
    ["psi", "e_psi", "yaw ψ"],
  ];
  return axes.map(([state, error, label], i) => {
    const actual = col(table, state);
    const err = col(table, error);
    const reference = new Float64Array(actual.length);
    for (let k = 0; k < reference.length; k++) reference[k] = actual[k] - err[k];
    return {
      title: `${label} tracking`,
      xLabel: "t (s)",
      yLabel: "angle (rad)",
      series: [
        { label: "reference", x: t, y: reference, color: REF, dash: "5 4" },
        { label: "response", x: t, y: actual, color: C[i] },
      ],
    };
  });
}

function errors(table: RunTable): Panel[] {
  const t = col(table, "t");
  return [
    {
      title: "attitude tracking errors",
      xLabel: "t (s)",
      yLabel: "error (rad)",
      series: [
        { label: "e_φ", x: t, y: col(table, "e_phi"), color: C[0] },
        { label: "e_θ", x: t, y: col(table, "e_theta"), color: C[1] },
        { label: "e_ψ", x: t, y: col(table, "e_psi"), color: C[2] },
      ],
    },
    {
      title: "airspeed tracking error",
      xLabel: "t (s)",
      yLabel: "error (m/s)",
      series: [{ label: "e_V", x: t, y: col(table, "e_v"), color: C[3] }],
    },
  ];
}

function controls(table: RunTable): Panel[] {
  const t = col(table, "t");
  return [
    {
      title: "control moments",
      xLabel: "t (s)",
      yLabel: "moment (N·m)",
      series: [
        { label: "M_x", x: t, y: col(table, "m_x"), color: C[0] },
        { label: "M_y", x: t, y: col(table, "m_y"), color: C[1] },
        { label: "M_z", x: t, y: col(table, "m_z"), color: C[2] },
      ],
    },
    {
      title: "thrust command and its two parts",
      xLabel: "t (s)",
      yLabel: "force (N)",
      series: [
        { label: "T_x", x: t, y: col(table, "t_x"), color: C[3] },
        { label: "sliding part", x: t, y: col(table, "t_xs"), color: C[4], dash: "5 4" },
        { label: "optimal part", x: t, y: col(table, "t_xa"), color: C[5], dash: "2 3" },
      ],
    },
  ];
}

function gains(table: RunTable): Panel[] {
  const t = col(table, "t");
  return [
    {
      title: "attitude loop adaptive gains",
      xLabel: "t (s)",
      yLabel: "gain",
      series: [
        { label: "k1", x: t, y: col(table, "k1"), color: C[0] },
        { label: "L", x: t, y: col(table, "L"), color: C[1] },
        { label: "r", x: t, y: col(table, "r"), color: C[2] },
      ],
    },
    {
      title: "airspeed loop adaptive gains",
      xLabel: "t (s)",
      yLabel: "gain",
      series: [
        { label: "L_v", x: t, y: col(table, "l_v"), color: C[3] },
        { label: "r_v", x: t, y: col(table, "r_v"), color: C[4] },
      ],
    },
  ];
}

function weights(table: RunTable): Panel[] {
  const t = col(table, "t");
  return [
    {
      title: "approximator weight norms",
      xLabel: "t (s)",
      yLabel: "norm",
      series: [
        { label: "critic ‖W_c‖", x: t, y: col(table, "wc_norm"), color: C[0] },
        { label: "actor ‖W_a‖", x: t, y: col(table, "wa_norm"), color: C[1] },
      ],
    },
    {
      title: "Bellman residual",
      xLabel: "t (s)",
      yLabel: "δ_B",
      series: [{ label: "δ_B", x: t, y: col(table, "delta_b"), color: C[3] }],
    },
  ];
}

const METRIC_KEYS = ["iae", "iacm", "int_abs_ev", "int_tx"] as const;

/** Run totals: the final sample of each running-integral column, or the summary entries. */
function runMetrics(input: RunInput): { name: string; values: number[] } {
  if (input.type === "summary") {
    return {
      name: input.summary.name,
      values: METRIC_KEYS.map((key) => summaryNumber(input.summary, key)),
    };
  }
  const table = input.table;
  if (table.rows === 0) throw new SchemaError(`no data rows in '${table.name}'`);
  return {
    name: table.name,
    values: METRIC_KEYS.map((key) => col(table, key)[table.rows - 1]),
  };
}

function metrics(inputs: RunInput[]): string {
  const runs = inputs.map(runMetrics);
  const groups: BarGroup[] = METRIC_KEYS.map((key, m) => ({
    label: key,
    entries: runs.map((run, r) => ({ label: run.name, value: run.values[m], color: C[r] })),
  }));
  return renderBarGroups("performance indices", groups);
}

export function buildFigure(kind: FigureKind, inputs: RunInput[]): string {
  if (kind === "metrics") return metrics(inputs);

  if (inputs.length !== 1 || inputs[0].type !== "csv") {
    throw new SchemaError(`kind '${kind}' takes exactly one run CSV`);
  }
  const table = inputs[0].table;
  if (table.rows === 0) throw new SchemaError(`no data rows in '${table.name}'`);
  switch (kind) {
    case "tracking":
      return renderPanels(tracking(table));
    case "errors":
      return renderPanels(errors(table));
    case "controls":
      return renderPanels(controls(table));
    case "gains":
      return renderPanels(gains(table));
    case "weights":
      return renderPanels(weights(table));
  }
}
