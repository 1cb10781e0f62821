import { describe, expect, it } from "vitest";

import {
  ConsoleStore,
  colorForState,
  editorKindFor,
  statusBarFor,
} from "../src/state.js";
import type { ChunkEvent } from "../src/types.js";

function chunk(
  stream: "stdout" | "stderr",
  seq: number,
  text: string,
): ChunkEvent {
  return { type: "chunk", stream, seq, text, b64: "" };
}

describe("colorForState", () => {
  it("maps required-unset to red", () => {
    expect(colorForState("required-unset")).toBe("red");
  });

  it("maps optional-unset to black", () => {
    expect(colorForState("optional-unset")).toBe("black");
  });

  it("maps set to blue", () => {
    expect(colorForState("set")).toBe("blue");
  });
});

describe("ConsoleStore", () => {
  it("concatenates chunk texts in seq order", () => {
    const store = new ConsoleStore();
    store.apply(chunk("stdout", 0, "-t\n"));
    store.apply(chunk("stdout", 1, "4\n"));
    expect(store.text("stdout")).toBe("-t\n4\n");
  });

  it("keeps streams separate", () => {
    const store = new ConsoleStore();
    store.apply(chunk("stdout", 0, "out"));
    store.apply(chunk("stderr", 0, "err"));
    expect(store.text("stdout")).toBe("out");
    expect(store.text("stderr")).toBe("err");
  });

  it("drops replayed chunks after reconnect, losing nothing", () => {
    const store = new ConsoleStore();
    const events = [
      chunk("stdout", 0, "a"),
      chunk("stdout", 1, "b"),
      // reconnect replays from the start
      chunk("stdout", 0, "a"),
      chunk("stdout", 1, "b"),
      chunk("stdout", 2, "c"),
    ];
    const applied = events.filter((e) => store.apply(e));
    expect(store.text("stdout")).toBe("abc");
    expect(applied.length).toBe(3);
  });

  it("throws on a gap instead of silently reordering", () => {
    const store = new ConsoleStore();
    store.apply(chunk("stdout", 0, "a"));
    expect(() => store.apply(chunk("stdout", 2, "c"))).toThrow(/gap/);
  });

  it("clear resets both streams", () => {
    const store = new ConsoleStore();
    store.apply(chunk("stdout", 0, "a"));
    store.clear();
    expect(store.text("stdout")).toBe("");
    store.apply(chunk("stdout", 0, "z"));
    expect(store.text("stdout")).toBe("z");
  });
});

describe("statusBarFor", () => {
  it("clean exit is not an error", () => {
    expect(
      statusBarFor({
        type: "status",
        status: "exited",
        code: 0,
        error_notification: false,
      }),
    ).toEqual({ text: "Finished (exit 0)", error: false });
  });

  it("nonzero exit flags the status bar", () => {
    const bar = statusBarFor({
      type: "status",
      status: "exited",
      code: 3,
      error_notification: true,
    });
    expect(bar.error).toBe(true);
    expect(bar.text).toContain("3");
  });

  it("killed flags the status bar", () => {
    expect(
      statusBarFor({
        type: "status",
        status: "killed",
        code: null,
        error_notification: true,
      }),
    ).toEqual({ text: "Killed", error: true });
  });
});

describe("editorKindFor", () => {
  it("chooses per-kind editors", () => {
    expect(editorKindFor("flag")).toBe("checkbox");
    expect(editorKindFor("choice")).toBe("buttons");
    expect(editorKindFor("infile")).toBe("path");
    expect(editorKindFor("outfile")).toBe("path");
    expect(editorKindFor("dir")).toBe("path");
    expect(editorKindFor("string")).toBe("text");
    expect(editorKindFor("int")).toBe("text");
    expect(editorKindFor("float")).toBe("text");
  });
});
