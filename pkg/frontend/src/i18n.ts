/** Every visible interface string lives here, keyed per language, so the
 * whole surface is translatable by adding a column. */

const STRINGS = {
  en: {
    appTitle: "Annotation campaigns",
    login: "Log in",
    register: "Register",
    logout: "Log out",
    loginName: "Login name",
    displayName: "Display name",
    credential: "Passphrase",
    domains: "Campaigns",
    pickSubdomain: "Pick a part of the collection",
    expertiseIntro: "Tell us what you know best (1 = novice, 5 = expert)",
    saveExpertise: "Save expertise",
    nextTasks: "Give me objects to describe",
    annotate: "Describe",
    objectsWaiting: "objects waiting",
    drawHint: "Drag a box on the image, then fill the field",
    submit: "Submit",
    skip: "Next object",
    search: "Search",
    searchPlaceholder: "Bird or concept name in any language",
    noResults: "Nothing found",
    priorAnnotations: "Already recorded",
    regionRequired: "Draw a box on the image first",
    offlineFallback: "Suggestions unavailable; plain text will be stored",
  },
  nl: {
    appTitle: "Annotatiecampagnes",
    login: "Inloggen",
    register: "Registreren",
    logout: "Uitloggen",
    loginName: "Gebruikersnaam",
    displayName: "Weergavenaam",
    credential: "Wachtwoordzin",
    domains: "Campagnes",
    pickSubdomain: "Kies een deel van de collectie",
    expertiseIntro: "Vertel ons waar u het meest van weet (1 = beginner, 5 = expert)",
    saveExpertise: "Expertise opslaan",
    nextTasks: "Geef me objecten om te beschrijven",
    annotate: "Beschrijven",
    objectsWaiting: "objecten beschikbaar",
    drawHint: "Sleep een kader op de afbeelding en vul het veld in",
    submit: "Opslaan",
    skip: "Volgend object",
    search: "Zoeken",
    searchPlaceholder: "Vogel- of conceptnaam in elke taal",
    noResults: "Niets gevonden",
    priorAnnotations: "Al vastgelegd",
    regionRequired: "Teken eerst een kader op de afbeelding",
    offlineFallback: "Suggesties niet beschikbaar; tekst wordt als tekst opgeslagen",
  },
};

export type Lang = keyof typeof STRINGS;
export type StringKey = keyof (typeof STRINGS)["en"];

export function t(lang: string, key: StringKey): string {
  const table = STRINGS[(lang in STRINGS ? lang : "en") as Lang];
  return table[key];
}

export const LANGUAGES: Lang[] = Object.keys(STRINGS) as Lang[];
