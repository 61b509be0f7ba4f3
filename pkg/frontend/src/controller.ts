// Session controller: the only piece that talks to the server. State
// transitions are fetch-then-rebuild; nothing is computed client-side.

import {
  ApiClient,
  LogEntryView,
  VersionConflictError,
  parseSessionFile,
} from "./api"
import { ViewState, buildViewState } from "./state"

export class SessionController {
  private constructor(
    private api: ApiClient,
    public sessionId: string,
    public view: ViewState,
  ) {}

  static async start(
    api: ApiClient,
    corpus: string,
    dialogue: string,
    annotator: string,
    entries?: LogEntryView[],
  ): Promise<SessionController> {
    const handle = await api.createSession(corpus, dialogue, annotator, entries)
    const controller = new SessionController(
      api,
      handle.session_id,
      // placeholder until the first refresh below
      undefined as unknown as ViewState,
    )
    await controller.refresh()
    return controller
  }

  static async resume(
    api: ApiClient,
    sessionId: string,
  ): Promise<SessionController> {
    const controller = new SessionController(
      api,
      sessionId,
      undefined as unknown as ViewState,
    )
    await controller.refresh()
    return controller
  }

  async refresh(banner: string | null = null): Promise<void> {
    const session = await this.api.getSession(this.sessionId)
    const prompt = await this.api.getPrompt(this.sessionId)
    this.view = buildViewState(session, prompt, banner)
  }

  async submit(answer: string, gpTag?: string): Promise<void> {
    if (this.view.session.finished || this.view.prompt.finished) {
      return
    }
    try {
      await this.api.postAnswer(
        this.sessionId,
        this.view.session.version,
        answer,
        gpTag,
      )
    } catch (error) {
      if (error instanceof VersionConflictError) {
        await this.refresh("session advanced elsewhere; reloading")
        return
      }
      this.view = { ...this.view, banner: `${(error as Error).message}` }
      return
    }
    await this.refresh()
  }

  async exportFile(): Promise<string> {
    return this.api.exportSession(this.sessionId)
  }

  // Undo has no client-side history: export the log, cut it, and let the
  // server rebuild a fresh session from the prefix.
  async truncateTo(length: number): Promise<void> {
    const text = await this.exportFile()
    const entries = parseSessionFile(text).slice(0, length)
    const handle = await this.api.createSession(
      this.view.session.corpus,
      this.view.session.dialogue,
      this.view.session.annotator,
      entries,
    )
    this.sessionId = handle.session_id
    await this.refresh(`rewound to answer ${length}`)
  }
}
