// Browser wiring: everything DOM-dependent lives here; all rendering
// goes through the pure modules so behavior is covered by node tests.

import { Client, ServiceError } from "./api.js";
import { DEFAULT_VIEW, fromScreen } from "./geometry.js";
import { approxRational, containsPoint, displayValue, negate } from "./rational.js";
import {
  LAYER_COLORS,
  renderCoverList,
  renderOutcomeCard,
  renderScene,
} from "./render.js";
import {
  addOverlay,
  initialState,
  loadProblem,
  setGainConvention,
  toggleOverlay,
  ViewState,
} from "./state.js";
import type { RationalJson } from "./types.js";
import { Walkthrough } from "./walkthrough.js";

const client = new Client("");
let state: ViewState = initialState();
let walkthrough: Walkthrough | null = null;

const $ = (id: string) => document.getElementById(id)!;

function parseVector(text: string): RationalJson[] {
  return text.split(",").map((c) => {
    const t = c.trim();
    return /^[+-]?\d+$/.test(t) ? parseInt(t, 10) : t;
  });
}

function fail(err: unknown) {
  const box = $("messages");
  box.textContent = err instanceof ServiceError
    ? `${err.body.code}: ${err.body.message}`
    : String(err);
  box.className = "error";
}

function note(text: string) {
  const box = $("messages");
  box.textContent = text;
  box.className = "note";
}

function redraw() {
  const layers = state.overlays.map((o, i) => ({
    label: o.label,
    color: LAYER_COLORS[i % LAYER_COLORS.length],
    poly: o.poly,
    visible: o.visible,
  }));
  if (state.upperImage && state.upperImage.dim !== 2) {
    $("scene").innerHTML =
      '<p class="note">explorer requires two objectives</p>';
    return;
  }
  $("scene").innerHTML = renderScene(layers, DEFAULT_VIEW,
                                     state.gainConvention);
  const toggles = $("overlays");
  toggles.innerHTML = "";
  state.overlays.forEach((o, i) => {
    const label = document.createElement("label");
    const box = document.createElement("input");
    box.type = "checkbox";
    box.checked = o.visible;
    box.addEventListener("change", () => {
      state = toggleOverlay(state, o.key);
      redraw();
    });
    label.appendChild(box);
    const swatch = document.createElement("span");
    swatch.className = "swatch";
    swatch.style.background = LAYER_COLORS[i % LAYER_COLORS.length];
    label.appendChild(swatch);
    label.appendChild(document.createTextNode(o.label));
    toggles.appendChild(label);
  });
  const svg = $("scene").querySelector("svg");
  if (svg) {
    svg.addEventListener("click", (ev) => {
      const rect = svg.getBoundingClientRect();
      const data = fromScreen(
        { x: ev.clientX - rect.left, y: ev.clientY - rect.top },
        DEFAULT_VIEW,
      );
      inspectOutcome(data.x, data.y);
    });
  }
  if (state.session) {
    $("session").innerHTML = renderOutcomeCard(state.session);
  }
}

function inspectOutcome(displayGain: number, time: number) {
  if (!state.solution) return;
  // convert back to storage coordinates (loss = -gain)
  const loss = state.gainConvention ? -displayGain : displayGain;
  const point: RationalJson[] = [approxRational(loss), approxRational(time)];
  const covering = state.solution.entries.map((entry) => ({
    x: entry.x.map((c) => String(displayValue(c))).join(", "),
    covers: containsPoint(entry.flexibility, point),
  }));
  const label = `${displayValue(negate(point[0]))}, ${displayValue(point[1])}`;
  $("inspector").innerHTML = renderCoverList(label, covering);
}

async function loadFromTextarea() {
  try {
    const doc = JSON.parse(($("problem-input") as HTMLTextAreaElement).value);
    const { id } = await client.postProblem(doc);
    const [image, solution, surrogates] = await Promise.all([
      client.upperImage(id),
      client.solution(id),
      client.surrogates(id),
    ]);
    state = loadProblem(state, id, image, solution, surrogates);
    walkthrough = new Walkthrough(client, id);
    note(`problem ${id} loaded`);
    redraw();
  } catch (err) {
    fail(err);
  }
}

async function sessionStart() {
  if (!walkthrough) return fail("load a problem first");
  try {
    await walkthrough.start();
    state = walkthrough.syncInto(state);
    note("session started: commit a first-stage x");
    redraw();
  } catch (err) {
    fail(err);
  }
}

async function sessionFirstStage() {
  if (!walkthrough) return;
  try {
    const x = parseVector(($("x-input") as HTMLInputElement).value);
    await walkthrough.commitFirstStage(x);
    const fx = await client.flexibility(state.problemId!, x);
    state = addOverlay(walkthrough.syncInto(state), "session-F",
                       `F(${x.join(",")})`, fx);
    note("first stage committed: realize a scenario");
    redraw();
  } catch (err) {
    fail(err);
  }
}

async function sessionRealize(random: boolean) {
  if (!walkthrough) return;
  try {
    const omega = ($("omega-input") as HTMLInputElement).value.trim();
    await walkthrough.realize(random ? { random: true } : { omega });
    state = walkthrough.syncInto(state);
    if (walkthrough.view.secondStageFrontier) {
      state = addOverlay(
        state,
        "session-frontier",
        `second stage (${walkthrough.view.session?.omega})`,
        walkthrough.view.secondStageFrontier,
      );
    }
    note(`scenario ${walkthrough.view.session?.omega} realized: pick y`);
    redraw();
  } catch (err) {
    fail(err);
  }
}

async function sessionChoose() {
  if (!walkthrough) return;
  try {
    const y = parseVector(($("y-input") as HTMLInputElement).value);
    await walkthrough.choose(y);
    state = walkthrough.syncInto(state);
    redraw();
  } catch (err) {
    fail(err);
  }
}

async function evpiInspect() {
  if (!state.problemId) return fail("load a problem first");
  try {
    const v = parseVector(($("v-input") as HTMLInputElement).value);
    const res = await client.evpi(state.problemId, v);
    const verts = res.region.vertices ?? [];
    const degenerate = verts.length === 1 &&
      verts[0].every((c) => String(c) === "0");
    if (degenerate) {
      note("no improvement from perfect information here");
    } else {
      note(`improvement region has ${verts.length} vertices`);
    }
    state = addOverlay(state, "evpi", `EVPI(${v.join(",")})`, res.region);
    redraw();
  } catch (err) {
    fail(err);
  }
}

export function boot() {
  $("load-problem").addEventListener("click", loadFromTextarea);
  $("gain-toggle").addEventListener("change", (ev) => {
    state = setGainConvention(state,
                              (ev.target as HTMLInputElement).checked);
    redraw();
  });
  $("session-start").addEventListener("click", sessionStart);
  $("commit-x").addEventListener("click", sessionFirstStage);
  $("realize").addEventListener("click", () => sessionRealize(false));
  $("realize-random").addEventListener("click", () => sessionRealize(true));
  $("choose-y").addEventListener("click", sessionChoose);
  $("evpi-go").addEventListener("click", evpiInspect);
}

if (typeof document !== "undefined") {
  document.addEventListener("DOMContentLoaded", boot);
}
