// Controller for the two-stage decision walkthrough. Pure with respect
// to the DOM: callers render from the returned state snapshots.

import { Client } from "./api.js";
import { applySession, ViewState } from "./state.js";
import type { PolyhedronJson, RationalJson, SessionJson } from "./types.js";

export interface WalkthroughView {
  session: SessionJson | null;
  secondStageFrontier: PolyhedronJson | null;
}

export class Walkthrough {
  view: WalkthroughView = { session: null, secondStageFrontier: null };

  constructor(
    private readonly client: Client,
    private readonly problemId: string,
  ) {}

  async start(seed?: number): Promise<SessionJson> {
    const session = await this.client.createSession(this.problemId, seed);
    this.view = { session, secondStageFrontier: null };
    return session;
  }

  private get sid(): string {
    const s = this.view.session;
    if (!s) throw new Error("no active session");
    return s.id;
  }

  async commitFirstStage(x: RationalJson[]): Promise<SessionJson> {
    const session = await this.client.firstStage(this.sid, x);
    this.view = { ...this.view, session };
    return session;
  }

  async realize(
    choice: { omega: string } | { random: true },
  ): Promise<SessionJson> {
    const session = await this.client.realize(this.sid, choice);
    const frontier = await this.client.secondStage(session.id);
    this.view = { session, secondStageFrontier: frontier };
    return session;
  }

  async choose(y: RationalJson[]): Promise<SessionJson> {
    const session = await this.client.choose(this.sid, y);
    this.view = { ...this.view, session };
    return session;
  }

  syncInto(state: ViewState): ViewState {
    return this.view.session ? applySession(state, this.view.session) : state;
  }
}
