// Pure UI state logic, unit-testable without a server or a DOM.

import type { ChunkEvent, RunEvent, WireState } from "./types.js";

export type TreeColor = "red" | "black" | "blue";

// Color derives solely from the wire state field.
export function colorForState(state: WireState): TreeColor {
  switch (state) {
    case "required-unset":
      return "red";
    case "optional-unset":
      return "black";
    case "set":
      return "blue";
  }
}

export interface StatusBar {
  text: string;
  error: boolean;
}

export function statusBarFor(event: RunEvent | null): StatusBar {
  if (event === null || event.type !== "status") {
    return { text: "Ready", error: false };
  }
  switch (event.status) {
    case "running":
      return { text: "Running…", error: false };
    case "exited":
      // error_notification also covers exit 0 with stderr output
      return event.code === 0 && !event.error_notification
        ? { text: "Finished (exit 0)", error: false }
        : { text: `Finished with errors (exit ${event.code})`, error: true };
    case "killed":
      return { text: "Killed", error: true };
    case "failed":
      return { text: "Run failed", error: true };
  }
}

/**
 * Per-stream console text built from chunk events. Chunks are applied in
 * seq order; duplicates from a reconnect replay are dropped, so the
 * rendered text always equals the concatenation of the chunk texts.
 */
export class ConsoleStore {
  private nextSeq: Record<string, number> = { stdout: 0, stderr: 0 };
  private parts: Record<string, string[]> = { stdout: [], stderr: [] };

  apply(event: ChunkEvent): boolean {
    const expected = this.nextSeq[event.stream];
    if (event.seq < expected) {
      return false; // replayed chunk after reconnect
    }
    if (event.seq > expected) {
      throw new Error(
        `gap in ${event.stream} stream: expected seq ${expected}, got ${event.seq}`,
      );
    }
    this.parts[event.stream].push(event.text);
    this.nextSeq[event.stream] = expected + 1;
    return true;
  }

  text(stream: "stdout" | "stderr"): string {
    return this.parts[stream].join("");
  }

  clear(): void {
    this.nextSeq = { stdout: 0, stderr: 0 };
    this.parts = { stdout: [], stderr: [] };
  }
}

export function editorKindFor(optionKind: string): string {
  switch (optionKind) {
    case "flag":
      return "checkbox";
    case "choice":
      return "buttons";
    case "infile":
    case "outfile":
    case "dir":
      return "path";
    default:
      return "text"; // string, int, float with inline validation
  }
}
