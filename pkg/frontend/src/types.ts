// Wire types mirroring the service API.

export type WireState = "required-unset" | "optional-unset" | "set";

export interface OptionRecord {
  id: string;
  group: string | null;
  label: string;
  kind: string;
  flag: string;
  required: boolean;
  repeatable: boolean;
  state: WireState;
  doc: string;
  default: string | null;
  choices: { value: string; label: string }[];
  value?: string | null;
  values?: string[];
}

export interface GroupRecord {
  name: string;
  doc: string;
  options: string[];
}

export interface SessionResource {
  session_id: string;
  name: string;
  title: string;
  executable: string;
  description: string;
  working_dir: string;
  groups: GroupRecord[];
  options: OptionRecord[];
  active_run: string | null;
}

export interface ChunkEvent {
  type: "chunk";
  stream: "stdout" | "stderr";
  seq: number;
  text: string;
  b64: string;
}

export interface StatusEvent {
  type: "status";
  status: "running" | "exited" | "failed" | "killed";
  code: number | null;
  error_notification: boolean;
}

export type RunEvent = ChunkEvent | StatusEvent;

export interface PreviewResponse {
  text: string;
  missing: string[];
}

export interface ApiError {
  error: string;
  detail: string;
  missing?: string[];
}
