// Thin client over the service endpoints. The UI holds no authoritative
// state: every mutation goes through the API and re-reads the result.

import type {
  ApiError,
  OptionRecord,
  PreviewResponse,
  RunEvent,
  SessionResource,
} from "./types.js";

export class ApiFailure extends Error {
  constructor(
    public status: number,
    public body: ApiError,
  ) {
    super(body.detail ?? body.error);
  }
}

async function request<T>(path: string, init?: RequestInit): Promise<T> {
  const response = await fetch(path, init);
  const body = await response.json();
  if (!response.ok || body.error) {
    throw new ApiFailure(response.status, body as ApiError);
  }
  return body as T;
}

export class Api {
  constructor(private base: string = "") {}

  getSession(): Promise<SessionResource> {
    return request(`${this.base}/api/session`);
  }

  setValue(id: string, raw: string): Promise<OptionRecord> {
    return request(`${this.base}/api/options/${encodeURIComponent(id)}/value`, {
      method: "PUT",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify({ raw }),
    });
  }

  clearValue(id: string): Promise<OptionRecord> {
    return request(`${this.base}/api/options/${encodeURIComponent(id)}/value`, {
      method: "DELETE",
    });
  }

  reset(): Promise<SessionResource> {
    return request(`${this.base}/api/reset`, { method: "POST" });
  }

  preview(): Promise<PreviewResponse> {
    return request(`${this.base}/api/preview`);
  }

  startRun(): Promise<{ run_id: string }> {
    return request(`${this.base}/api/run`, { method: "POST" });
  }

  killRun(runId: string): Promise<{ status: string }> {
    return request(`${this.base}/api/runs/${runId}/kill`, { method: "POST" });
  }

  doc(id: string): Promise<{ doc: string }> {
    return request(`${this.base}/api/doc/${encodeURIComponent(id)}`);
  }

  exportUrl(): string {
    return `${this.base}/api/spec/export`;
  }

  outputUrl(runId: string, stream: "stdout" | "stderr"): string {
    return `${this.base}/api/runs/${runId}/output?stream=${stream}`;
  }

  /**
   * Follow the run's server-push event stream, invoking onEvent for each
   * event in order. A dropped connection reconnects and resumes from the
   * next unseen event index; already-seen events are re-delivered only if
   * the server replays them (ConsoleStore drops duplicates by seq).
   */
  async streamEvents(
    runId: string,
    onEvent: (event: RunEvent) => void,
  ): Promise<void> {
    let consumed = 0;
    for (let attempt = 0; attempt < 5; attempt++) {
      try {
        const response = await fetch(
          `${this.base}/api/runs/${runId}/events?start=${consumed}`,
        );
        if (!response.ok || response.body === null) {
          throw new Error(`event stream failed: ${response.status}`);
        }
        const reader = response.body.getReader();
        const decoder = new TextDecoder();
        let buffer = "";
        let terminal = false;
        for (;;) {
          const { done, value } = await reader.read();
          if (done) break;
          buffer += decoder.decode(value, { stream: true });
          let idx;
          while ((idx = buffer.indexOf("\n\n")) >= 0) {
            const frame = buffer.slice(0, idx);
            buffer = buffer.slice(idx + 2);
            if (!frame.startsWith("data: ")) continue;
            const event = JSON.parse(frame.slice(6)) as RunEvent;
            consumed += 1;
            onEvent(event);
            if (event.type === "status" && event.status !== "running") {
              terminal = true;
            }
          }
        }
        if (terminal) return;
      } catch {
        // fall through to reconnect
      }
      await new Promise((resolve) => setTimeout(resolve, 200));
    }
    throw new Error("event stream dropped and could not be resumed");
  }
}
