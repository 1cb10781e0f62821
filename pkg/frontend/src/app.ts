// Application shell: menu bar, button bar, option tree, options pane with
// an Information tab, console/errors panels, status bar.

import { Api, ApiFailure } from "./api.js";
import {
  ConsoleStore,
  colorForState,
  editorKindFor,
  statusBarFor,
} from "./state.js";
import type { OptionRecord, RunEvent, SessionResource } from "./types.js";

export class App {
  private session: SessionResource | null = null;
  private selected: string | null = null;
  private consoleStore = new ConsoleStore();
  private activeRun: string | null = null;

  constructor(
    private api: Api,
    private root: HTMLElement,
    private doc: Document = document,
  ) {}

  async start(): Promise<void> {
    this.renderLayout();
    try {
      this.session = await this.api.getSession();
    } catch {
      this.renderRetryBanner();
      return;
    }
    this.doc.title = this.session.title;
    this.renderTree();
    this.setStatus("Ready", false);
  }

  // --- layout -------------------------------------------------------------

  private renderLayout(): void {
    this.root.innerHTML = `
      <nav id="menu-bar">
        <span class="menu-title"></span>
        <button id="menu-open" title="Reload the spec from the server">Open</button>
        <a id="menu-save" href="#" download="settings.xml">Save Settings XML</a>
        <button id="menu-help">Help</button>
      </nav>
      <div id="button-bar">
        <button id="btn-preview">Preview</button>
        <button id="btn-reset">Reset All</button>
        <button id="btn-expand">Expand Tree</button>
        <button id="btn-collapse">Collapse Tree</button>
        <button id="btn-run" class="run">RUN PROGRAM</button>
        <button id="btn-kill" disabled>Kill</button>
      </div>
      <main id="middle">
        <ul id="option-tree"></ul>
        <section id="options-pane">
          <div class="pane-tabs">
            <button id="tab-editor" class="active">Editor</button>
            <button id="tab-info">Information</button>
          </div>
          <div id="editor-body"><p>Select an option in the tree.</p></div>
          <div id="info-body" hidden></div>
        </section>
      </main>
      <section id="output">
        <div class="pane-tabs">
          <button id="tab-console" class="active">Console</button>
          <button id="tab-errors">Errors</button>
          <a id="save-stdout" href="#" download="stdout.txt" hidden>Save console</a>
          <a id="save-stderr" href="#" download="stderr.txt" hidden>Save errors</a>
        </div>
        <pre id="console-panel"></pre>
        <pre id="errors-panel" hidden></pre>
      </section>
      <footer id="status-bar">Ready</footer>
    `;
    this.el("menu-save").setAttribute("href", this.api.exportUrl());
    this.el("menu-open").addEventListener("click", () => void this.start());
    this.el("menu-help").addEventListener("click", () => this.showHelp());
    this.el("btn-preview").addEventListener("click", () => void this.preview());
    this.el("btn-reset").addEventListener("click", () => void this.resetAll());
    this.el("btn-expand").addEventListener("click", () => this.setTreeOpen(true));
    this.el("btn-collapse").addEventListener("click", () => this.setTreeOpen(false));
    this.el("btn-run").addEventListener("click", () => void this.run());
    this.el("btn-kill").addEventListener("click", () => void this.kill());
    this.el("tab-console").addEventListener("click", () => this.showOutputTab("console"));
    this.el("tab-errors").addEventListener("click", () => this.showOutputTab("errors"));
    this.el("tab-editor").addEventListener("click", () => this.showPaneTab("editor"));
    this.el("tab-info").addEventListener("click", () => this.showPaneTab("info"));
  }

  private renderRetryBanner(): void {
    const banner = this.doc.createElement("div");
    banner.id = "retry-banner";
    banner.textContent = "Cannot reach the host service. ";
    const retry = this.doc.createElement("button");
    retry.textContent = "Retry";
    retry.addEventListener("click", () => void this.start());
    banner.appendChild(retry);
    this.root.prepend(banner);
  }

  private el(id: string): HTMLElement {
    const found = this.doc.getElementById(id);
    if (!found) throw new Error(`missing element #${id}`);
    return found;
  }

  // --- option tree --------------------------------------------------------

  private renderTree(): void {
    if (!this.session) return;
    this.root.querySelector(".menu-title")!.textContent = this.session.title;
    const byId = new Map(this.session.options.map((o) => [o.id, o]));
    const tree = this.el("option-tree");
    tree.innerHTML = "";
    for (const group of this.session.groups) {
      const groupItem = this.doc.createElement("li");
      groupItem.className = "tree-group";
      const details = this.doc.createElement("details");
      details.open = true;
      const summary = this.doc.createElement("summary");
      summary.textContent = group.name;
      details.appendChild(summary);
      const list = this.doc.createElement("ul");
      for (const id of group.options) {
        const option = byId.get(id)!;
        const item = this.doc.createElement("li");
        item.className = `tree-option color-${colorForState(option.state)}`;
        item.dataset.optionId = option.id;
        item.textContent = option.label || option.id;
        item.addEventListener("click", () => void this.selectOption(option.id));
        list.appendChild(item);
      }
      details.appendChild(list);
      groupItem.appendChild(details);
      tree.appendChild(groupItem);
    }
    if (this.selected) void this.selectOption(this.selected);
  }

  private setTreeOpen(open: boolean): void {
    this.el("option-tree")
      .querySelectorAll("details")
      .forEach((d) => (d.open = open));
  }

  // --- options pane -------------------------------------------------------

  async selectOption(id: string): Promise<void> {
    if (!this.session) return;
    const option = this.session.options.find((o) => o.id === id);
    if (!option) return;
    this.selected = id;
    this.el("option-tree")
      .querySelectorAll(".tree-option")
      .forEach((node) => {
        node.classList.toggle(
          "selected",
          (node as HTMLElement).dataset.optionId === id,
        );
      });
    this.renderEditor(option);
    this.el("info-body").textContent = option.doc || "(no documentation)";
    this.showPaneTab("editor");
  }

  private renderEditor(option: OptionRecord): void {
    const body = this.el("editor-body");
    body.innerHTML = "";
    const heading = this.doc.createElement("h3");
    heading.textContent = option.label || option.id;
    body.appendChild(heading);
    const meta = this.doc.createElement("p");
    meta.className = "editor-meta";
    meta.textContent =
      `${option.kind}${option.required ? ", required" : ""}` +
      (option.flag ? ` (${option.flag})` : "");
    body.appendChild(meta);

    const error = this.doc.createElement("p");
    error.className = "editor-error";
    error.id = "editor-error";
    error.hidden = true;

    const commit = async (raw: string) => {
      try {
        await this.api.setValue(option.id, raw);
        error.hidden = true;
        await this.refreshSession();
      } catch (failure) {
        error.textContent =
          failure instanceof ApiFailure ? failure.body.detail : String(failure);
        error.hidden = false;
      }
    };

    switch (editorKindFor(option.kind)) {
      case "checkbox": {
        const label = this.doc.createElement("label");
        const box = this.doc.createElement("input");
        box.type = "checkbox";
        box.checked = option.state === "set" && option.value === "true";
        box.addEventListener("change", () =>
          void commit(box.checked ? "true" : "false"),
        );
        label.append(box, " enabled");
        body.appendChild(label);
        break;
      }
      case "buttons": {
        for (const choice of option.choices) {
          const button = this.doc.createElement("button");
          button.textContent = choice.label || choice.value;
          button.className = "choice-button";
          if (option.value === choice.value) button.classList.add("active");
          button.addEventListener("click", () => void commit(choice.value));
          body.appendChild(button);
        }
        break;
      }
      default: {
        // text and path editors: input with inline validation on commit
        const input = this.doc.createElement("input");
        input.type = "text";
        input.id = "editor-input";
        input.value = option.value ?? option.default ?? "";
        if (option.values && option.values.length > 1) {
          input.value = option.values[option.values.length - 1];
        }
        const apply = this.doc.createElement("button");
        apply.textContent = option.repeatable ? "Add value" : "Set value";
        apply.id = "editor-apply";
        apply.addEventListener("click", () => void commit(input.value));
        input.addEventListener("keydown", (e) => {
          if ((e as KeyboardEvent).key === "Enter") void commit(input.value);
        });
        body.append(input, apply);
        if (option.values && option.values.length > 1) {
          const current = this.doc.createElement("p");
          current.className = "editor-meta";
          current.textContent = `values: ${option.values.join(", ")}`;
          body.appendChild(current);
        }
      }
    }

    const clear = this.doc.createElement("button");
    clear.textContent = "Clear";
    clear.id = "editor-clear";
    clear.addEventListener("click", async () => {
      try {
        await this.api.clearValue(option.id);
        error.hidden = true;
        await this.refreshSession();
      } catch (failure) {
        error.textContent =
          failure instanceof ApiFailure ? failure.body.detail : String(failure);
        error.hidden = false;
      }
    });
    body.appendChild(clear);
    body.appendChild(error);
  }

  private showPaneTab(which: "editor" | "info"): void {
    (this.el("editor-body") as HTMLElement).hidden = which !== "editor";
    (this.el("info-body") as HTMLElement).hidden = which !== "info";
    this.el("tab-editor").classList.toggle("active", which === "editor");
    this.el("tab-info").classList.toggle("active", which === "info");
  }

  private showOutputTab(which: "console" | "errors"): void {
    (this.el("console-panel") as HTMLElement).hidden = which !== "console";
    (this.el("errors-panel") as HTMLElement).hidden = which !== "errors";
    this.el("tab-console").classList.toggle("active", which === "console");
    this.el("tab-errors").classList.toggle("active", which === "errors");
  }

  // --- actions ------------------------------------------------------------

  async refreshSession(): Promise<void> {
    this.session = await this.api.getSession();
    this.renderTree();
  }

  async preview(): Promise<void> {
    const preview = await this.api.preview();
    this.appendConsole(`$ ${preview.text}\n`);
    if (preview.missing.length > 0) {
      this.setStatus(`Missing required: ${preview.missing.join(", ")}`, true);
    }
  }

  async resetAll(): Promise<void> {
    this.session = await this.api.reset();
    this.renderTree();
  }

  async run(): Promise<void> {
    try {
      const { run_id } = await this.api.startRun();
      this.activeRun = run_id;
    } catch (failure) {
      if (failure instanceof ApiFailure && failure.body.missing) {
        this.setStatus(
          `Cannot run: missing ${failure.body.missing.join(", ")}`,
          true,
        );
        return;
      }
      throw failure;
    }
    this.consoleStore.clear();
    this.el("console-panel").textContent = "";
    this.el("errors-panel").textContent = "";
    (this.el("btn-kill") as HTMLButtonElement).disabled = false;
    this.setStatus("Running…", false);
    const runId = this.activeRun!;
    (this.el("save-stdout") as HTMLElement).hidden = false;
    (this.el("save-stderr") as HTMLElement).hidden = false;
    this.el("save-stdout").setAttribute("href", this.api.outputUrl(runId, "stdout"));
    this.el("save-stderr").setAttribute("href", this.api.outputUrl(runId, "stderr"));
    await this.api.streamEvents(runId, (event) => this.onRunEvent(event));
    (this.el("btn-kill") as HTMLButtonElement).disabled = true;
    this.activeRun = null;
    await this.refreshSession();
  }

  private onRunEvent(event: RunEvent): void {
    if (event.type === "chunk") {
      if (this.consoleStore.apply(event)) {
        if (event.stream === "stdout") {
          this.el("console-panel").textContent = this.consoleStore.text("stdout");
        } else {
          this.el("errors-panel").textContent = this.consoleStore.text("stderr");
          this.el("tab-errors").classList.add("has-errors");
        }
      }
      return;
    }
    const bar = statusBarFor(event);
    this.setStatus(bar.text, bar.error);
  }

  async kill(): Promise<void> {
    if (this.activeRun) await this.api.killRun(this.activeRun);
  }

  private appendConsole(text: string): void {
    const panel = this.el("console-panel");
    panel.textContent = (panel.textContent ?? "") + text;
    this.showOutputTab("console");
  }

  private setStatus(text: string, error: boolean): void {
    const bar = this.el("status-bar");
    bar.textContent = text;
    bar.classList.toggle("error", error);
  }

  private showHelp(): void {
    if (!this.session) return;
    this.appendConsole(
      `${this.session.name}: ${this.session.description}\n` +
        "Select options in the tree, set values, Preview, then RUN PROGRAM.\n",
    );
  }
}
