// Placeholder translation unit; implementation forthcoming.
namespace rodimpact {}
