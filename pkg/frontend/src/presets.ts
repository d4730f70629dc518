/** The four showcase queries, matching the server's bundled query files. */

export interface Preset {
  name: string;
  label: string;
  text: string;
}

export const PRESETS: Preset[] = [
  {
    name: "q1_model_expansion",
    label: "Expand Regressor_004",
    text: `PREFIX AgriOnt: <http://www.ucd.ie/consus/AgriOnt#>
PREFIX AgriKMap: <http://www.ucd.ie/consus/AgriKMap#>
SELECT ?predicate1 ?object1 ?predicate2 ?object2
WHERE {
  AgriKMap:Regressor_004 ?predicate1 ?object1 .
  ?object1 ?predicate2 ?object2 .
}`,
  },
  {
    name: "q2_soil_ph_transformations",
    label: "Transformations of soil pH",
    text: `PREFIX AgriOnt: <http://www.ucd.ie/consus/AgriOnt#>
PREFIX AgriKMap: <http://www.ucd.ie/consus/AgriKMap#>
SELECT ?subject ?predicate ?object
WHERE {
  ?subject AgriOnt:transformationOf AgriOnt:SoilPH .
  ?subject ?predicate ?object
}`,
  },
  {
    name: "q3_crop_yield_models",
    label: "Models predicting crop yield",
    text: `PREFIX AgriOnt: <http://www.ucd.ie/consus/AgriOnt#>
PREFIX AgriKMap: <http://www.ucd.ie/consus/AgriKMap#>
PREFIX rdf: <http://www.w3.org/1999/02/22-rdf-syntax-ns#>
SELECT ?subject ?predicate ?object
WHERE {
  ?subject ?predicate ?object .
  ?subject AgriOnt:predicts ?object2 .
  ?object2 rdf:type AgriOnt:CropYield .
}`,
  },
  {
    name: "q4_sheath_rot_models",
    label: "Models related to sheath rot",
    text: `PREFIX AgriOnt: <http://www.ucd.ie/consus/AgriOnt#>
PREFIX AgriKMap: <http://www.ucd.ie/consus/AgriKMap#>
SELECT ?subject1 ?predicate2 ?object2
WHERE {
  ?subject1 ?predicate1 ?object1 .
  ?object1 AgriOnt:hasState AgriOnt:SheathRot .
  ?subject1 ?predicate2 ?object2 .
}
LIMIT 100`,
  },
];
