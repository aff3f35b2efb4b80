// Thin fetch client over the engine's HTTP interface. Every method
// returns parsed JSON; rule violations surface as ApiError with the
// server's detail text, network failures as ConnectionLost.

import type {
  AnalysisView,
  CreateSessionBody,
  HintResponse,
  HistoryEntry,
  MoveDoc,
  SessionDoc,
} from "./model.js";

export class ApiError extends Error {
  constructor(
    public readonly status: number,
    public readonly detail: string,
  ) {
    super(detail);
  }
}

export class ConnectionLost extends Error {
  constructor() {
    super("cannot reach the engine");
  }
}

export interface PlayResult {
  session: SessionDoc;
  applied: HistoryEntry[];
}

export class ApiClient {
  constructor(private readonly base: string = "") {}

  private async request<T>(path: string, init?: RequestInit): Promise<T> {
    let resp: Response;
    try {
      resp = await fetch(this.base + path, init);
    } catch {
      throw new ConnectionLost();
    }
    if (!resp.ok) {
      let detail = resp.statusText;
      try {
        const body = (await resp.json()) as { detail?: unknown };
        if (typeof body.detail === "string") detail = body.detail;
        else if (body.detail !== undefined) detail = JSON.stringify(body.detail);
      } catch {
        // non-JSON error body; keep the status text
      }
      throw new ApiError(resp.status, detail);
    }
    return (await resp.json()) as T;
  }

  private post<T>(path: string, body?: unknown): Promise<T> {
    return this.request<T>(path, {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: body === undefined ? undefined : JSON.stringify(body),
    });
  }

  async health(): Promise<{ status: string }> {
    return this.request("/healthz");
  }

  async createSession(body: CreateSessionBody): Promise<SessionDoc> {
    const data = await this.post<{ session: SessionDoc }>("/sessions", body);
    return data.session;
  }

  async getSession(id: string): Promise<SessionDoc> {
    const data = await this.request<{ session: SessionDoc }>(
      `/sessions/${encodeURIComponent(id)}`,
    );
    return data.session;
  }

  async playMove(id: string, move: MoveDoc): Promise<PlayResult> {
    return this.post(`/sessions/${encodeURIComponent(id)}/moves`, { move });
  }

  async aiMove(id: string): Promise<PlayResult> {
    return this.post(`/sessions/${encodeURIComponent(id)}/ai-move`);
  }

  async hint(id: string): Promise<HintResponse> {
    return this.request(`/sessions/${encodeURIComponent(id)}/hint`);
  }

  async analysis(id: string): Promise<AnalysisView> {
    const data = await this.request<{ analysis: AnalysisView }>(
      `/sessions/${encodeURIComponent(id)}/analysis`,
    );
    return data.analysis;
  }

  async previewMove(id: string, move: MoveDoc): Promise<AnalysisView> {
    const params = new URLSearchParams({
      type: move.type,
      amount: String(move.amount),
    });
    if (move.heapIndex !== undefined) {
      params.set("heapIndex", String(move.heapIndex));
    }
    const data = await this.request<{ analysis: AnalysisView }>(
      `/sessions/${encodeURIComponent(id)}/analysis?${params.toString()}`,
    );
    return data.analysis;
  }
}
