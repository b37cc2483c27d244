// Cockpit view state: which served sets are overlaid, the gain-axis
// convention, and a mirror of the active decision session. All
// mathematical payloads are stored verbatim as received.

import type {
  PolyhedronJson,
  SessionJson,
  SetSolutionJson,
  SurrogatesJson,
} from "./types.js";

export interface OverlayEntry {
  key: string;
  label: string;
  poly: PolyhedronJson;
  visible: boolean;
}

export interface ViewState {
  problemId: string | null;
  gainConvention: boolean;
  upperImage: PolyhedronJson | null;
  solution: SetSolutionJson | null;
  surrogates: SurrogatesJson | null;
  overlays: OverlayEntry[];
  session: SessionJson | null;
}

export function initialState(): ViewState {
  return {
    problemId: null,
    gainConvention: true,
    upperImage: null,
    solution: null,
    surrogates: null,
    overlays: [],
    session: null,
  };
}

const STAGE_ORDER = [
  "AwaitFirstStage",
  "AwaitRealization",
  "AwaitSecondStage",
  "Done",
];

export function loadProblem(
  state: ViewState,
  problemId: string,
  upperImage: PolyhedronJson,
  solution: SetSolutionJson,
  surrogates: SurrogatesJson | null,
): ViewState {
  const overlays: OverlayEntry[] = [
    { key: "upper-image", label: "upper image", poly: upperImage,
      visible: true },
  ];
  solution.entries.forEach((entry, i) => {
    overlays.push({
      key: `F-${i}`,
      label: `F(${entry.x.map(String).join(",")})`,
      poly: entry.flexibility,
      visible: true,
    });
  });
  if (surrogates) {
    overlays.push({
      key: "ws",
      label: "wait-and-see",
      poly: surrogates.wait_and_see.combined,
      visible: false,
    });
    overlays.push({
      key: "ev",
      label: "expected value",
      poly: surrogates.expected_value_upper_image,
      visible: false,
    });
  }
  return {
    ...state,
    problemId,
    upperImage,
    solution,
    surrogates,
    overlays,
    session: null,
  };
}

export function toggleOverlay(state: ViewState, key: string): ViewState {
  return {
    ...state,
    overlays: state.overlays.map((o) =>
      o.key === key ? { ...o, visible: !o.visible } : o,
    ),
  };
}

export function addOverlay(
  state: ViewState,
  key: string,
  label: string,
  poly: PolyhedronJson,
): ViewState {
  const rest = state.overlays.filter((o) => o.key !== key);
  return {
    ...state,
    overlays: [...rest, { key, label, poly, visible: true }],
  };
}

export function setGainConvention(state: ViewState, on: boolean): ViewState {
  return { ...state, gainConvention: on };
}

/** Sessions only move forward; stale or out-of-order updates are ignored. */
export function applySession(
  state: ViewState,
  session: SessionJson,
): ViewState {
  if (state.session && state.session.id === session.id) {
    const before = STAGE_ORDER.indexOf(state.session.stage);
    const after = STAGE_ORDER.indexOf(session.stage);
    if (after < before) return state;
  }
  return { ...state, session };
}
